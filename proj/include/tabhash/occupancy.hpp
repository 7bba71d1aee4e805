#pragma once
// Monte Carlo occupancy experiments: distribute a fixed key set with a fresh
// hash function per trial and record |h(X)| plus a bin-hit indicator.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tabhash/hash_family.hpp"
#include "tabhash/keyset.hpp"

namespace tabhash {

enum class QueryMode {
    FixedBin,   ///< hit iff target_bin is in h(X)
    QueryBall,  ///< hit iff h(q) is in h(X), q = smallest key not in X
};

/// Trials in which two of the table entries T_position[0], ..., T_position[span-1]
/// (raw r-bit values) coincide. Only meaningful for simple tabulation.
struct CollisionEvent {
    unsigned position = 0;
    std::uint64_t span = 2;
};

struct OccupancyConfig {
    KeySetSpec keyset;
    FamilySpec family;
    std::uint64_t n = 0;  ///< bins; values are projected when n < 2^r
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    QueryMode query_mode = QueryMode::FixedBin;
    std::uint64_t target_bin = 0;
    double gamma = 1.0;
    std::optional<CollisionEvent> event;
    /// Deviations t for the tail table; empty selects the default grid.
    std::vector<double> tail_grid;
    unsigned threads = 1;  ///< worker count only; never changes results

    void validate() const;
};

struct TailRow {
    double t = 0;
    double upper_freq = 0;  ///< Pr^[|h(X)| >= mu0 + t]
    double lower_freq = 0;  ///< Pr^[|h(X)| <= mu0 - t]
    double general_upper = 0;  ///< constant-free curves; general form evaluated at t/2
    double general_lower = 0;
    std::optional<double> sparse_upper;  ///< absent when m > n
    std::optional<double> sparse_lower;
};

struct EventStats {
    CollisionEvent event;
    std::uint64_t count = 0;
    double frequency = 0;
    double mean_given_event = 0;
    double variance_given_event = 0;
    double mean_given_no_event = 0;
    double variance_given_no_event = 0;
    /// (mean_given_no_event - mean_given_event) / its standard error; 0 if undefined.
    double shift_z = 0;
};

struct OccupancyReport {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    unsigned c = 0;
    std::uint64_t trials = 0;
    FamilyKind family = FamilyKind::SimpleTabulation;
    QueryMode query_mode = QueryMode::FixedBin;
    std::uint64_t target = 0;  ///< target bin, or the query key in QueryBall mode
    std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;  ///< (|h(X)|, trials), ascending
    double mean = 0;
    double variance = 0;     ///< unbiased sample variance
    double mean_se = 0;
    double variance_se = 0;  ///< from the sample fourth central moment
    std::uint64_t hits = 0;
    double p_hat = 0;
    double p_se = 0;
    double mu0 = 0;
    double p0 = 0;
    double hit_gap_bound = 0;  ///< m^(2-1/c)/n^2, doubled in QueryBall mode
    double gamma = 1.0;
    double whp_failure = 0;    ///< n^-gamma
    std::vector<TailRow> tails;
    std::optional<EventStats> event;
};

OccupancyReport run_occupancy(const OccupancyConfig& config);

/// Default tail grid: multiples {0, 0.5, ..., 3} of sqrt(m^(2-1/c)).
std::vector<double> default_tail_grid(std::uint64_t m, unsigned c);

/// Moments of a histogram of (value, count) pairs.
struct HistogramMoments {
    std::uint64_t total = 0;
    double mean = 0;
    double variance = 0;  ///< unbiased
    double fourth_central = 0;
};
HistogramMoments histogram_moments(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& histogram);

}  // namespace tabhash
