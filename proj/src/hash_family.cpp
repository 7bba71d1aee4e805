#include "tabhash/hash_family.hpp"

#include <stdexcept>

namespace tabhash {

std::string_view to_string(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::SimpleTabulation: return "simple-tabulation";
        case FamilyKind::FullyRandom: return "fully-random";
        case FamilyKind::PolyK: return "poly-k";
    }
    return "unknown";
}

FamilyKind parse_family_kind(std::string_view name) {
    if (name == "simple-tabulation" || name == "tab") return FamilyKind::SimpleTabulation;
    if (name == "fully-random" || name == "random") return FamilyKind::FullyRandom;
    if (name == "poly-k" || name == "poly") return FamilyKind::PolyK;
    throw std::invalid_argument("unknown hash family '" + std::string(name) + "'");
}

FullyRandomHash::FullyRandomHash(KeySchema, unsigned out_bits, std::uint64_t seed)
    : seed_(seed), mask_(low_mask(out_bits)) {
    if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("FullyRandomHash: out_bits must be in [1, 64]");
}

PolyHash::PolyHash(KeySchema schema, unsigned out_bits, std::vector<std::uint64_t> coefficients,
                   std::uint64_t prime)
    : out_bits_(out_bits), prime_(prime), coefficients_(std::move(coefficients)) {
    if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("PolyHash: out_bits must be in [1, 64]");
    if (coefficients_.empty()) throw std::invalid_argument("PolyHash: k must be >= 1");
    if (prime >> 63) throw std::invalid_argument("PolyHash: prime must be < 2^63");
    if (schema.key_bits() >= 63 || prime < (std::uint64_t{1} << schema.key_bits()))
        throw std::invalid_argument("PolyHash: prime must be >= 2^key_bits");
    for (auto a : coefficients_)
        if (a >= prime) throw std::invalid_argument("PolyHash: coefficient not reduced mod p");
}

PolyHash PolyHash::random(KeySchema schema, unsigned out_bits, unsigned k, std::uint64_t prime,
                          std::uint64_t seed) {
    if (k == 0) throw std::invalid_argument("PolyHash: k must be >= 1");
    if (prime == 0) throw std::invalid_argument("PolyHash: prime must be positive");
    CounterStream rng(seed);
    std::vector<std::uint64_t> coeffs(k);
    for (auto& a : coeffs) a = rng.below(prime);
    return PolyHash(schema, out_bits, std::move(coeffs), prime);
}

std::uint64_t PolyHash::raw(std::uint64_t key) const noexcept {
    unsigned __int128 acc = 0;
    for (auto a : coefficients_) acc = (acc * key + a) % prime_;
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t PolyHash::operator()(std::uint64_t key) const noexcept {
    const unsigned __int128 v = raw(key);
    return static_cast<std::uint64_t>((v << out_bits_) / prime_);
}

void FamilySpec::validate() const {
    if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("family: out_bits must be in [1, 64]");
    if (kind == FamilyKind::PolyK) {
        if (poly_k == 0) throw std::invalid_argument("family: poly-k needs k >= 1");
        if (schema.key_bits() >= 63 || prime < (std::uint64_t{1} << schema.key_bits()) || (prime >> 63))
            throw std::invalid_argument("family: poly-k prime must satisfy 2^key_bits <= p < 2^63");
    }
}

HashFamily::HashFamily(const FamilySpec& spec, std::uint64_t seed)
    : kind_(spec.kind), schema_(spec.schema), out_bits_(spec.out_bits),
      impl_(std::in_place_type<FullyRandomHash>, spec.schema, spec.out_bits, seed) {
    spec.validate();
    switch (spec.kind) {
        case FamilyKind::SimpleTabulation:
            impl_.emplace<SimpleTabulation>(spec.schema, spec.out_bits, seed);
            break;
        case FamilyKind::FullyRandom:
            break;
        case FamilyKind::PolyK:
            impl_.emplace<PolyHash>(PolyHash::random(spec.schema, spec.out_bits, spec.poly_k, spec.prime, seed));
            break;
    }
}

}  // namespace tabhash
