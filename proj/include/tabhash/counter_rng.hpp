#pragma once
// Counter-based deterministic random streams.
//
// Every draw is a pure function of (key, counter), so table entries, trial
// seeds and key sets can be regenerated in any order on any thread.

#include <cstdint>
#include <stdexcept>

namespace tabhash {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent 64-bit value (or sub-seed) from a base key and an index.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t index) noexcept {
    return mix64(mix64(key + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

/// derive(derive(key, a), b): two-level addressing, e.g. (seed, table, entry).
constexpr std::uint64_t derive2(std::uint64_t key, std::uint64_t a, std::uint64_t b) noexcept {
    return derive(derive(key, a), b);
}

constexpr std::uint64_t low_mask(unsigned bits) noexcept {
    return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

/// Sequential view over a counter-based stream.
class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t key, std::uint64_t start = 0) noexcept
        : key_(key), counter_(start) {}

    constexpr std::uint64_t next() noexcept { return derive(key_, counter_++); }

    /// Uniform value in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("CounterStream::below: bound must be positive");
        // Largest multiple of bound representable in 64 bits.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        for (;;) {
            const std::uint64_t v = next();
            if (v <= limit) return v % bound;
        }
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace tabhash
