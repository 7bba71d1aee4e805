#pragma once
// Exact occupancy laws for tiny simple-tabulation instances, obtained by
// enumerating every possible filling of the character tables.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabhash/key_schema.hpp"

namespace tabhash {

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Enumeration is allowed while r * c * 2^char_bits <= 24, i.e. at most 2^24 fillings.
inline constexpr unsigned kMaxEnumerationBits = 24;

struct ExactInstance {
    KeySchema schema;
    unsigned r = 1;
    std::uint64_t n = 0;  ///< bins; 0 means 2^r (no projection)

    std::uint64_t bins() const noexcept { return n == 0 ? (std::uint64_t{1} << r) : n; }
    void validate() const;
};

/// Exact Pr[target in h(X)] over a uniformly random table filling.
Rational exact_hit_probability(const ExactInstance& inst, std::span<const std::uint64_t> keys, std::uint64_t target);

/// Exact law of |h(X)|: element v is Pr[|h(X)| = v], for v = 0..min(m, bins).
std::vector<Rational> exact_occupancy_distribution(const ExactInstance& inst, std::span<const std::uint64_t> keys);

/// Exact E[|h(X)|].
Rational exact_mean_occupancy(const ExactInstance& inst, std::span<const std::uint64_t> keys);

}  // namespace tabhash
