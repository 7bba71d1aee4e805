#include "tabhash/simple_tabulation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tabhash {

SimpleTabulation::SimpleTabulation(KeySchema schema, unsigned out_bits)
    : schema_(schema), out_bits_(out_bits), stride_(schema.alphabet_size()) {
    if (out_bits == 0 || out_bits > 64) throw std::invalid_argument("SimpleTabulation: out_bits must be in [1, 64]");
}

SimpleTabulation::SimpleTabulation(KeySchema schema, unsigned out_bits, std::uint64_t seed)
    : SimpleTabulation(schema, out_bits) {
    seed_ = seed;
    const std::uint64_t mask = low_mask(out_bits);
    entries_.resize(schema.c() * stride_);
    for (unsigned i = 0; i < schema.c(); ++i)
        for (std::size_t a = 0; a < stride_; ++a) entries_[i * stride_ + a] = derive2(seed, i, a) & mask;
}

SimpleTabulation SimpleTabulation::from_tables(KeySchema schema, unsigned out_bits,
                                               std::vector<std::uint64_t> entries) {
    SimpleTabulation h(schema, out_bits);
    if (entries.size() != schema.c() * h.stride_)
        throw std::invalid_argument("SimpleTabulation::from_tables: expected " +
                                    std::to_string(schema.c() * h.stride_) + " entries, got " +
                                    std::to_string(entries.size()));
    const std::uint64_t mask = low_mask(out_bits);
    if (std::any_of(entries.begin(), entries.end(), [mask](std::uint64_t v) { return (v & ~mask) != 0; }))
        throw std::invalid_argument("SimpleTabulation::from_tables: entry wider than out_bits");
    h.entries_ = std::move(entries);
    return h;
}

std::uint64_t SimpleTabulation::entry(unsigned position, std::uint64_t character) const {
    if (position >= schema_.c() || character >= stride_)
        throw std::out_of_range("SimpleTabulation::entry: position character out of range");
    return entries_[position * stride_ + character];
}

std::span<const std::uint64_t> SimpleTabulation::table(unsigned position) const {
    if (position >= schema_.c()) throw std::out_of_range("SimpleTabulation::table: position out of range");
    return {entries_.data() + position * stride_, stride_};
}

std::uint64_t SimpleTabulation::hash_position_set(std::span<const PositionCharacter> chars) const {
    std::vector<PositionCharacter> sorted(chars.begin(), chars.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("hash_position_set: duplicate position character");
    std::uint64_t h = 0;
    for (const auto& pc : sorted) h ^= entry(pc.position, pc.character);
    return h;
}

SplitHash::SplitHash(const SimpleTabulation& h, unsigned k, unsigned r) : h_(&h), k_(k), r_(r) {
    if (k == 0 || r == 0 || k * r != h.out_bits())
        throw std::invalid_argument("split_k: out_bits " + std::to_string(h.out_bits()) + " is not " +
                                    std::to_string(k) + " x " + std::to_string(r));
}

std::uint64_t SplitHash::view(unsigned j, std::uint64_t key) const {
    if (j >= k_) throw std::out_of_range("SplitHash::view: index out of range");
    return slice(h_->hash(key), j, r_);
}

void SplitHash::views(std::uint64_t key, std::span<std::uint64_t> out) const {
    if (out.size() < k_) throw std::invalid_argument("SplitHash::views: output span too small");
    const std::uint64_t v = h_->hash(key);
    for (unsigned j = 0; j < k_; ++j) out[j] = slice(v, j, r_);
}

}  // namespace tabhash
