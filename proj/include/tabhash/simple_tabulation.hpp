#pragma once
// Simple tabulation hashing: h(x) = T_0[x_0] ^ T_1[x_1] ^ ... ^ T_{c-1}[x_{c-1}].

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tabhash/key_schema.hpp"

namespace tabhash {

class SimpleTabulation {
public:
    /// Fills every table entry T_i[a] from derive2(seed, i, a), masked to out_bits.
    SimpleTabulation(KeySchema schema, unsigned out_bits, std::uint64_t seed);

    /// Explicit tables, laid out table-major: entries[i * 2^char_bits + a] = T_i[a].
    static SimpleTabulation from_tables(KeySchema schema, unsigned out_bits, std::vector<std::uint64_t> entries);

    const KeySchema& schema() const noexcept { return schema_; }
    unsigned out_bits() const noexcept { return out_bits_; }
    /// Present only for seeded instances; explicit tables carry no seed.
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }

    std::uint64_t entry(unsigned position, std::uint64_t character) const;
    std::span<const std::uint64_t> table(unsigned position) const;

    /// Checked hash: throws std::out_of_range for keys outside the universe.
    std::uint64_t hash(std::uint64_t key) const {
        schema_.require_key(key);
        return hash_unchecked(key);
    }

    std::uint64_t hash_unchecked(std::uint64_t key) const noexcept {
        const unsigned cb = schema_.char_bits();
        const std::uint64_t mask = schema_.char_mask();
        const std::uint64_t* t = entries_.data();
        std::uint64_t h = 0;
        for (unsigned i = 0; i < schema_.c(); ++i, key >>= cb, t += stride_) h ^= t[key & mask];
        return h;
    }

    /// XOR of the entries of a set of position characters; the empty set hashes to 0.
    /// Duplicate position characters are rejected (the argument is a set).
    std::uint64_t hash_position_set(std::span<const PositionCharacter> chars) const;

private:
    SimpleTabulation(KeySchema schema, unsigned out_bits);

    KeySchema schema_;
    unsigned out_bits_;
    std::size_t stride_;
    std::optional<std::uint64_t> seed_;
    std::vector<std::uint64_t> entries_;
};

/// The k r-bit slices of one (k*r)-bit tabulation. View j is bits [j*r, (j+1)*r).
class SplitHash {
public:
    SplitHash(const SimpleTabulation& h, unsigned k, unsigned r);

    unsigned k() const noexcept { return k_; }
    unsigned r() const noexcept { return r_; }

    std::uint64_t view(unsigned j, std::uint64_t key) const;

    /// All k views from a single pass over the tables.
    void views(std::uint64_t key, std::span<std::uint64_t> out) const;

    static std::uint64_t slice(std::uint64_t value, unsigned j, unsigned r) noexcept {
        return (value >> (j * r)) & low_mask(r);
    }

private:
    const SimpleTabulation* h_;
    unsigned k_;
    unsigned r_;
};

}  // namespace tabhash
