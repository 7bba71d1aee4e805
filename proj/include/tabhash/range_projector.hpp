#pragma once
// Most-uniform projection of r-bit hash values onto n bins: s(y) = floor(y * n / 2^r).

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tabhash {

class RangeProjector {
public:
    RangeProjector(unsigned out_bits, std::uint64_t n) : r_(out_bits), n_(n) {
        if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("RangeProjector: r must be in [1, 64]");
        if (n == 0) throw std::invalid_argument("RangeProjector: n must be >= 1");
        if (out_bits < 64 && n > (std::uint64_t{1} << out_bits))
            throw std::invalid_argument("RangeProjector: n = " + std::to_string(n) + " exceeds 2^" +
                                        std::to_string(out_bits));
    }

    unsigned out_bits() const noexcept { return r_; }
    std::uint64_t n() const noexcept { return n_; }
    bool is_identity() const noexcept { return r_ < 64 && n_ == (std::uint64_t{1} << r_); }

    /// y must be < 2^r; one widening multiply and a shift.
    std::uint64_t operator()(std::uint64_t y) const noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(y) * n_) >> r_);
    }

    std::uint64_t project(std::uint64_t y) const {
        if (r_ < 64 && (y >> r_) != 0) throw std::out_of_range("RangeProjector::project: y >= 2^r");
        return (*this)(y);
    }

    /// |s^-1(z)| = ceil((z+1) 2^r / n) - ceil(z 2^r / n).
    std::uint64_t preimage_size(std::uint64_t z) const {
        if (z >= n_) throw std::out_of_range("RangeProjector::preimage_size: bin out of range");
        return static_cast<std::uint64_t>(first_preimage(z + 1) - first_preimage(z));
    }

private:
    // Smallest y with s(y) >= z, i.e. ceil(z * 2^r / n).
    unsigned __int128 first_preimage(std::uint64_t z) const noexcept {
        const unsigned __int128 num = static_cast<unsigned __int128>(z) << r_;
        return (num + n_ - 1) / n_;
    }

    unsigned r_;
    std::uint64_t n_;
};

}  // namespace tabhash
