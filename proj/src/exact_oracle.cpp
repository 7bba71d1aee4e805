#include "tabhash/exact_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tabhash/range_projector.hpp"

namespace tabhash {
namespace {

// Calls visit(bins) once per table filling, where bins[i] is the bin of keys[i].
template <typename Visit>
void for_each_filling(const ExactInstance& inst, std::span<const std::uint64_t> keys, Visit&& visit) {
    inst.validate();
    for (auto k : keys) inst.schema.require_key(k);
    const unsigned c = inst.schema.c();
    const std::uint64_t sigma = inst.schema.alphabet_size();
    const std::uint64_t entries = c * sigma;
    const std::uint64_t fillings = std::uint64_t{1} << (inst.r * entries);
    const std::uint64_t mask = low_mask(inst.r);
    const RangeProjector projector(inst.r, inst.bins());

    // Entry (i, a) of filling f is bits [(i*sigma + a) * r, ...) of f.
    std::vector<std::uint64_t> offsets(keys.size() * c);
    for (std::size_t k = 0; k < keys.size(); ++k)
        for (unsigned i = 0; i < c; ++i) offsets[k * c + i] = (i * sigma + inst.schema.character(keys[k], i)) * inst.r;

    std::vector<std::uint64_t> bins(keys.size());
    for (std::uint64_t f = 0; f < fillings; ++f) {
        for (std::size_t k = 0; k < keys.size(); ++k) {
            std::uint64_t h = 0;
            for (unsigned i = 0; i < c; ++i) h ^= (f >> offsets[k * c + i]) & mask;
            bins[k] = projector(h);
        }
        visit(std::span<const std::uint64_t>(bins));
    }
}

std::uint64_t filling_count(const ExactInstance& inst) {
    return std::uint64_t{1} << (inst.r * inst.schema.c() * inst.schema.alphabet_size());
}

}  // namespace

Rational Rational::reduced(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

void ExactInstance::validate() const {
    if (r == 0 || r > kMaxEnumerationBits) throw std::invalid_argument("exact: r out of range");
    const std::uint64_t bits = static_cast<std::uint64_t>(r) * schema.c() * schema.alphabet_size();
    if (bits > kMaxEnumerationBits)
        throw std::invalid_argument("exact: enumeration of 2^" + std::to_string(bits) +
                                    " table fillings exceeds the 2^24 limit");
    if (n > (std::uint64_t{1} << r)) throw std::invalid_argument("exact: n exceeds 2^r");
}

Rational exact_hit_probability(const ExactInstance& inst, std::span<const std::uint64_t> keys, std::uint64_t target) {
    inst.validate();
    if (target >= inst.bins()) throw std::out_of_range("exact: target bin out of range");
    std::uint64_t hits = 0;
    for_each_filling(inst, keys, [&](std::span<const std::uint64_t> bins) {
        if (std::find(bins.begin(), bins.end(), target) != bins.end()) ++hits;
    });
    return Rational::reduced(hits, filling_count(inst));
}

std::vector<Rational> exact_occupancy_distribution(const ExactInstance& inst, std::span<const std::uint64_t> keys) {
    inst.validate();
    std::vector<std::uint64_t> counts(std::min<std::uint64_t>(keys.size(), inst.bins()) + 1, 0);
    std::vector<std::uint64_t> scratch;
    for_each_filling(inst, keys, [&](std::span<const std::uint64_t> bins) {
        scratch.assign(bins.begin(), bins.end());
        std::sort(scratch.begin(), scratch.end());
        ++counts[static_cast<std::size_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin())];
    });
    std::vector<Rational> law;
    law.reserve(counts.size());
    for (auto cnt : counts) law.push_back(Rational::reduced(cnt, filling_count(inst)));
    return law;
}

Rational exact_mean_occupancy(const ExactInstance& inst, std::span<const std::uint64_t> keys) {
    const auto law = exact_occupancy_distribution(inst, keys);
    const std::uint64_t total = filling_count(inst);
    std::uint64_t weighted = 0;
    for (std::size_t v = 0; v < law.size(); ++v) weighted += v * (law[v].num * (total / law[v].den));
    return Rational::reduced(weighted, total);
}

}  // namespace tabhash
