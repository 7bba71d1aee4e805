#pragma once
// Bloom filter in the k-array model: k bit arrays of n bits, array j indexed by
// s(h_j(x)) where h_j is the j-th r-bit slice of one (k*r)-bit simple
// tabulation, or, when k*r > 64, the j-th of k independent tabulations.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tabhash/key_schema.hpp"
#include "tabhash/range_projector.hpp"
#include "tabhash/simple_tabulation.hpp"

namespace tabhash {

struct BloomParams {
    std::uint64_t m = 0;  ///< expected number of keys
    unsigned k = 1;       ///< number of arrays / hash functions
    std::uint64_t n = 1;  ///< bits per array
    unsigned r = 1;       ///< bits per hash value before projection
    bool multi_instance = false;  ///< k separate tabulations instead of one (k*r)-bit table

    void validate() const;
};

struct BloomPlanRequest {
    std::uint64_t m = 0;
    unsigned k = 1;
    std::optional<std::uint64_t> n;  ///< default round(m / ln 2)
    std::optional<unsigned> r;       ///< default smallest r with 2^r >= n^2
    bool allow_multi_instance = false;
};

BloomParams plan_bloom(const BloomPlanRequest& request);

/// Smallest r with 2^r >= n^2.
unsigned min_bits_for_square(std::uint64_t n);

/// Fully random false-positive rate p0(n, m)^k.
double theoretical_fpr(unsigned k, std::uint64_t n, std::uint64_t m);

/// Upper bound on the FPR of a simple-tabulation filter with projection:
/// per array max over bins z of p0'(rho_z) + 2 m^(2-1/c) rho_z^2, rho_z = |s^-1(z)| / 2^r,
/// p0'(rho) = 1 - (1 - rho)^m, raised to the k-th power.
double projected_fpr_upper_bound(const BloomParams& params, unsigned c);

class BloomFilter;

struct FprMeasurement {
    std::uint64_t queries = 0;
    std::uint64_t false_positives = 0;
    double fpr = 0;
    double se = 0;
    double theoretical = 0;      ///< p0(n, m)^k
    double tabulation_bound = 0;       ///< (p0 + 2 m^(2-1/c) / n^2)^k
    double projected_bound = 0;  ///< projected_fpr_upper_bound
};

/// Queries uniform keys of the filter's universe, skipping members, and counts positives.
/// m in the reference values is the number of members.
FprMeasurement measure_fpr(const BloomFilter& filter, std::span<const std::uint64_t> members,
                           std::uint64_t queries, std::uint64_t seed);

class BloomFilter {
public:
    BloomFilter(KeySchema schema, BloomParams params, std::uint64_t seed);

    const KeySchema& schema() const noexcept { return schema_; }
    const BloomParams& params() const noexcept { return params_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t insert_count() const noexcept { return inserts_; }

    void insert(std::uint64_t key);
    bool query(std::uint64_t key) const;

    /// Array index per hash function for a key.
    void positions(std::uint64_t key, std::span<std::uint64_t> out) const;

    bool bit(unsigned array, std::uint64_t index) const;
    std::uint64_t popcount(unsigned array) const;
    const std::vector<std::uint64_t>& words(unsigned array) const { return arrays_.at(array); }

    /// Little-endian binary layout:
    ///   "TBLM" | u32 version=1 | u32 c | u32 char_bits | u64 m | u32 k | u64 n | u32 r |
    ///   u8 multi_instance | u64 seed | u64 insert_count |
    ///   k x ( u64 word_count | word_count x u64 )
    void serialize(std::ostream& out) const;
    static BloomFilter deserialize(std::istream& in);

    friend bool operator==(const BloomFilter& a, const BloomFilter& b) {
        return a.schema_ == b.schema_ && a.seed_ == b.seed_ && a.inserts_ == b.inserts_ &&
               a.arrays_ == b.arrays_ && a.params_.m == b.params_.m && a.params_.k == b.params_.k &&
               a.params_.n == b.params_.n && a.params_.r == b.params_.r &&
               a.params_.multi_instance == b.params_.multi_instance;
    }

private:
    KeySchema schema_;
    BloomParams params_;
    std::uint64_t seed_;
    std::uint64_t inserts_ = 0;
    RangeProjector projector_;
    std::vector<SimpleTabulation> tabulations_;
    std::vector<std::vector<std::uint64_t>> arrays_;
};

}  // namespace tabhash
