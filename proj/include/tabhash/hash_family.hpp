#pragma once
// Hash families compared in occupancy experiments: simple tabulation and two
// baselines (fully random, k-independent polynomial). All produce r-bit values.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabhash/key_schema.hpp"
#include "tabhash/simple_tabulation.hpp"

namespace tabhash {

enum class FamilyKind { SimpleTabulation, FullyRandom, PolyK };

std::string_view to_string(FamilyKind kind) noexcept;
FamilyKind parse_family_kind(std::string_view name);

/// Mersenne prime 2^61 - 1, the default modulus of the polynomial baseline.
inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// A keyed random function: each key gets an independent uniform r-bit value
/// fixed by (seed, key). Evaluation is pure, so concurrent callers always see
/// one consistent value per key.
class FullyRandomHash {
public:
    FullyRandomHash(KeySchema schema, unsigned out_bits, std::uint64_t seed);
    std::uint64_t operator()(std::uint64_t key) const noexcept { return derive(seed_, key) & mask_; }

private:
    std::uint64_t seed_;
    std::uint64_t mask_;
};

/// Degree-(k-1) polynomial over Z_p, evaluated by Horner's rule and mapped to
/// [2^r] with the floor(v * 2^r / p) rule. coefficients[0] is the leading one.
class PolyHash {
public:
    PolyHash(KeySchema schema, unsigned out_bits, std::vector<std::uint64_t> coefficients, std::uint64_t prime);
    /// Coefficients drawn uniformly in [0, p) from the counter stream of seed.
    static PolyHash random(KeySchema schema, unsigned out_bits, unsigned k, std::uint64_t prime, std::uint64_t seed);

    std::uint64_t raw(std::uint64_t key) const noexcept;
    std::uint64_t operator()(std::uint64_t key) const noexcept;

    std::uint64_t prime() const noexcept { return prime_; }
    const std::vector<std::uint64_t>& coefficients() const noexcept { return coefficients_; }

private:
    unsigned out_bits_;
    std::uint64_t prime_;
    std::vector<std::uint64_t> coefficients_;
};

/// Parameters of a family without its seed.
struct FamilySpec {
    FamilyKind kind = FamilyKind::SimpleTabulation;
    KeySchema schema{4, 8};
    unsigned out_bits = 32;
    unsigned poly_k = 2;
    std::uint64_t prime = kMersenne61;

    void validate() const;
};

class HashFamily {
public:
    HashFamily(const FamilySpec& spec, std::uint64_t seed);

    FamilyKind kind() const noexcept { return kind_; }
    const KeySchema& schema() const noexcept { return schema_; }
    unsigned out_bits() const noexcept { return out_bits_; }

    /// Checked evaluation; keys outside the schema throw.
    std::uint64_t eval(std::uint64_t key) const {
        schema_.require_key(key);
        return eval_unchecked(key);
    }

    std::uint64_t eval_unchecked(std::uint64_t key) const noexcept {
        return std::visit([key](const auto& f) -> std::uint64_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SimpleTabulation>)
                return f.hash_unchecked(key);
            else
                return f(key);
        }, impl_);
    }

    /// Null unless this is a simple tabulation instance.
    const SimpleTabulation* tabulation() const noexcept { return std::get_if<SimpleTabulation>(&impl_); }

private:
    FamilyKind kind_;
    KeySchema schema_;
    unsigned out_bits_;
    std::variant<SimpleTabulation, FullyRandomHash, PolyHash> impl_;
};

}  // namespace tabhash
