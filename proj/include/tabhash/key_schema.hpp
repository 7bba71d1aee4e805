#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "tabhash/counter_rng.hpp"

namespace tabhash {

/// Keys are c characters of char_bits bits each. Character 0 is the least
/// significant char_bits bits of the key.
class KeySchema {
public:
    /// Character tables are materialized, so a character is capped at 24 bits.
    static constexpr unsigned kMaxCharBits = 24;

    KeySchema(unsigned c, unsigned char_bits) : c_(c), char_bits_(char_bits) {
        if (c == 0) throw std::invalid_argument("KeySchema: c must be >= 1");
        if (char_bits == 0 || char_bits > kMaxCharBits)
            throw std::invalid_argument("KeySchema: char_bits must be in [1, 24]");
        if (c * char_bits > 64) throw std::invalid_argument("KeySchema: c * char_bits must be <= 64");
    }

    unsigned c() const noexcept { return c_; }
    unsigned char_bits() const noexcept { return char_bits_; }
    unsigned key_bits() const noexcept { return c_ * char_bits_; }
    std::uint64_t alphabet_size() const noexcept { return std::uint64_t{1} << char_bits_; }
    std::uint64_t char_mask() const noexcept { return low_mask(char_bits_); }
    std::uint64_t key_mask() const noexcept { return low_mask(key_bits()); }

    /// Number of distinct keys; saturates at 2^64 - 1 for 64-bit keys.
    std::uint64_t universe_size() const noexcept {
        return key_bits() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << key_bits());
    }

    bool contains(std::uint64_t key) const noexcept { return (key & ~key_mask()) == 0; }

    void require_key(std::uint64_t key) const {
        if (!contains(key))
            throw std::out_of_range("key " + std::to_string(key) + " exceeds " + std::to_string(key_bits()) +
                                    "-bit universe");
    }

    std::uint64_t character(std::uint64_t key, unsigned position) const noexcept {
        return (key >> (position * char_bits_)) & char_mask();
    }

    std::uint64_t with_character(std::uint64_t key, unsigned position, std::uint64_t ch) const noexcept {
        const unsigned shift = position * char_bits_;
        return (key & ~(char_mask() << shift)) | ((ch & char_mask()) << shift);
    }

    friend bool operator==(const KeySchema&, const KeySchema&) = default;

private:
    unsigned c_;
    unsigned char_bits_;
};

/// (position, character) pair; a key is the set of its c position characters.
struct PositionCharacter {
    unsigned position = 0;
    std::uint64_t character = 0;

    friend auto operator<=>(const PositionCharacter&, const PositionCharacter&) = default;
};

}  // namespace tabhash
