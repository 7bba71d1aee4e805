#pragma once
// Checkable procedures behind the occupancy analysis of simple tabulation:
// position-character group orderings, d-boundedness, internal collision
// counts and dependent key tuples.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tabhash/key_schema.hpp"
#include "tabhash/simple_tabulation.hpp"

namespace tabhash {

/// An ordering alpha_1 < ... < alpha_k of position characters together with the
/// group of each: the keys whose largest position character is alpha_i.
/// Only characters occurring in X (and q's, if given) are listed; every other
/// character precedes them with an empty group.
struct GroupOrdering {
    KeySchema schema{1, 1};
    std::vector<PositionCharacter> order;
    std::vector<std::vector<std::uint64_t>> groups;  ///< groups[i] belongs to order[i]
    std::optional<std::uint64_t> query;
    std::uint64_t m = 0;

    std::vector<std::uint64_t> group_sizes() const;
    std::uint64_t max_group_size() const;
    /// m^(1-1/c) without a query key, 2 m^(1-1/c) with one.
    double group_size_bound() const;
};

/// Builds the ordering from the back: on the remaining keys, take the position
/// with the most distinct characters, emit its least frequent character as the
/// latest remaining one and drop the keys containing it. With a query key its
/// characters are never selected and are placed first. The result is re-derived
/// from the definition and checked against the group-size bound; a violation
/// throws CheckFailure naming the offending group.
GroupOrdering compute_group_ordering(const KeySchema& schema, std::span<const std::uint64_t> keys,
                                     std::optional<std::uint64_t> query = std::nullopt);

/// Recomputes groups of an ordering straight from the definition.
std::vector<std::vector<std::uint64_t>> groups_from_order(const KeySchema& schema,
                                                          std::span<const PositionCharacter> order,
                                                          std::span<const std::uint64_t> keys);

/// true iff every group size g satisfies g <= factor * m^(1-1/c), compared exactly.
bool within_group_bound(std::uint64_t g, std::uint64_t m, unsigned c, unsigned factor);

using BinFunction = std::function<std::uint64_t(std::uint64_t)>;

struct CollisionCount {
    std::vector<std::uint64_t> per_group;  ///< C_i
    std::uint64_t total = 0;               ///< C
};

/// C_i = number of unordered pairs within group i that share a bin.
CollisionCount count_internal_collisions(const GroupOrdering& ordering, const BinFunction& bin);

struct CollisionReport {
    std::uint64_t trials = 0;
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    unsigned c = 0;
    double m0 = 0;  ///< group-size cap used in the bounds
    std::vector<std::uint64_t> totals;  ///< C per trial
    double mean = 0;
    double variance = 0;
    double mean_se = 0;
    double variance_se = 0;
    double mean_bound = 0;      ///< m * m0 / (2n)
    double variance_bound = 0;  ///< (3^c + 1) m^2 / n + m * m0^2 / n^2
};

/// Collision statistics over fresh simple tabulations h_t (seed derive(master_seed, t), r = log2 n,
/// n a power of two). m0 = m^(1-1/c), doubled when the ordering has a query key.
CollisionReport collision_experiment(const GroupOrdering& ordering, std::uint64_t n, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads = 1);

struct DBoundedResult {
    bool bounded = true;
    std::optional<std::size_t> group;  ///< first violating group
    std::uint64_t bin = 0;
    std::uint64_t load = 0;            ///< that group's load in that bin
};

/// true iff no group places more than d keys in one bin.
DBoundedResult check_d_bounded(std::span<const std::vector<std::uint64_t>> groups, const BinFunction& bin,
                               std::uint64_t d);

/// min{2c(3+gamma)^c, 2^(2c(3+gamma))}
double d_bounded_threshold(unsigned c, double gamma);

struct DependentTuples {
    unsigned arity = 0;
    std::uint64_t ordered_count = 0;  ///< tuples (x_1..x_k) in A_1 x .. x A_k with empty symmetric difference
    /// Sorted tuples of pairwise distinct keys with empty symmetric difference, deduplicated.
    std::vector<std::vector<std::uint64_t>> distinct_witnesses;
    /// ((k-1)!!)^c * prod sqrt(|A_i|); only for even arity.
    std::optional<double> bound;
};

/// Exhaustive search; the product of the set sizes must be at most 2^24.
DependentTuples find_dependent_tuples(const KeySchema& schema, std::span<const std::vector<std::uint64_t>> sets);

}  // namespace tabhash
