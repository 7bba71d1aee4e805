#pragma once
// Declarative generators for structured key sets.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tabhash/key_schema.hpp"

namespace tabhash {

enum class KeySetKind {
    Grid,           ///< [d1] x [d2] in characters 0 and 1
    HypercubeProduct,  ///< [2]^l x [m / 2^l]: characters 0..l-1 binary, character l in [m / 2^l]
    PairProduct,    ///< [m / t] x [t]
    Interval,       ///< 0, 1, ..., m-1
    UniformRandom,  ///< m distinct uniform keys, collisions rejected
    All,            ///< the whole universe
};

struct KeySetSpec {
    KeySetKind kind = KeySetKind::Interval;
    std::uint64_t a = 0;  ///< grid: d1; hypercube: l; pairs: t; interval/random: m
    std::uint64_t b = 0;  ///< grid: d2; hypercube/pairs: m
    std::uint64_t seed = 0;  ///< random only

    static KeySetSpec grid(std::uint64_t d1, std::uint64_t d2) { return {KeySetKind::Grid, d1, d2, 0}; }
    static KeySetSpec hypercube(std::uint64_t l, std::uint64_t m) { return {KeySetKind::HypercubeProduct, l, m, 0}; }
    static KeySetSpec pairs(std::uint64_t t, std::uint64_t m) { return {KeySetKind::PairProduct, t, m, 0}; }
    static KeySetSpec interval(std::uint64_t m) { return {KeySetKind::Interval, m, 0, 0}; }
    static KeySetSpec random(std::uint64_t m, std::uint64_t seed) { return {KeySetKind::UniformRandom, m, 0, seed}; }
    static KeySetSpec all() { return {KeySetKind::All, 0, 0, 0}; }

    /// Declared cardinality (for All, the universe size of the schema).
    std::uint64_t cardinality(const KeySchema& schema) const;

    /// Compact grammar: grid:AxB, hcube:L,M, pairs:T,M, interval:M, rand:M[,SEED], all.
    static KeySetSpec parse(std::string_view text, std::uint64_t default_seed = 0);
    std::string to_string() const;
};

/// Distinct keys in a fixed order. Throws std::invalid_argument if the set
/// does not fit the schema.
std::vector<std::uint64_t> generate_keyset(const KeySetSpec& spec, const KeySchema& schema);

/// Smallest key of the universe not in keys (keys need not be sorted).
std::uint64_t smallest_absent_key(std::vector<std::uint64_t> keys, const KeySchema& schema);

}  // namespace tabhash
