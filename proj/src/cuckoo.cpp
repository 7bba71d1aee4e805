#include "tabhash/cuckoo.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "tabhash/counter_rng.hpp"

namespace tabhash {
namespace {

constexpr unsigned kMaxTableBits = 32;

unsigned log2_exact(std::uint64_t size) {
    if (size == 0 || !std::has_single_bit(size)) throw std::invalid_argument("cuckoo: table size must be a power of two");
    const unsigned bits = static_cast<unsigned>(std::countr_zero(size));
    if (bits > kMaxTableBits) throw std::invalid_argument("cuckoo: table size exceeds 2^32");
    return bits;
}

}  // namespace

void CuckooConfig::validate() const {
    if (!(slack > 0)) throw std::invalid_argument("cuckoo: slack must be positive");
}

std::uint64_t cuckoo_table_size(std::uint64_t keys, double slack) {
    if (!(slack > 0)) throw std::invalid_argument("cuckoo: slack must be positive");
    const long double need = (1.0L + slack) * static_cast<long double>(keys);
    std::uint64_t size = 1;
    while (static_cast<long double>(size) <= need) size <<= 1;
    return size;
}

CuckooTable::CuckooTable(KeySchema schema, std::uint64_t table_size, CuckooConfig config, std::uint64_t seed)
    : schema_(schema),
      size_(table_size),
      bits_(log2_exact(table_size)),
      config_(config),
      seed_(seed),
      chain_limit_(config.max_chain != 0 ? config.max_chain : 32 * std::max(1u, bits_)),
      hash_(schema, std::max(1u, 2 * bits_), derive(seed, 0)),
      keys_(2 * table_size, 0),
      used_(2 * table_size, 0) {
    config_.validate();
}

void CuckooTable::reseed() {
    ++generation_;
    hash_ = SimpleTabulation(schema_, std::max(1u, 2 * bits_), derive(seed_, generation_));
}

std::uint64_t CuckooTable::slot(unsigned table, std::uint64_t key) const {
    if (table > 1) throw std::out_of_range("cuckoo: table index must be 0 or 1");
    return (hash_.hash(key) >> (table * bits_)) & low_mask(bits_);
}

std::optional<std::uint64_t> CuckooTable::cell(unsigned table, std::uint64_t s) const {
    if (table > 1 || s >= size_) throw std::out_of_range("cuckoo: cell out of range");
    const std::size_t i = table * size_ + s;
    if (!used_[i]) return std::nullopt;
    return keys_[i];
}

std::optional<unsigned> CuckooTable::find(std::uint64_t key) const {
    const std::uint64_t v = hash_.hash(key);
    for (unsigned t = 0; t < 2; ++t) {
        const std::size_t i = t * size_ + ((v >> (t * bits_)) & low_mask(bits_));
        if (used_[i] && keys_[i] == key) return t;
    }
    return std::nullopt;
}

bool CuckooTable::place(std::uint64_t& key, std::vector<std::size_t>* path) {
    unsigned t = 0;
    for (unsigned step = 0; step <= chain_limit_; ++step) {
        const std::size_t i = t * size_ + ((hash_.hash_unchecked(key) >> (t * bits_)) & low_mask(bits_));
        if (!used_[i]) {
            used_[i] = 1;
            keys_[i] = key;
            ++count_;
            return true;
        }
        if (path) path->push_back(i);
        std::swap(key, keys_[i]);
        t ^= 1;
    }
    return false;
}

bool CuckooTable::rebuild(std::vector<std::uint64_t> pending) {
    while (retries_ < config_.max_retries) {
        ++retries_;
        reseed();
        std::fill(used_.begin(), used_.end(), 0);
        count_ = 0;
        bool ok = true;
        for (auto key : pending) {
            if (!place(key, nullptr)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

bool CuckooTable::insert(std::uint64_t key) {
    schema_.require_key(key);
    if (contains(key)) return true;
    std::uint64_t homeless = key;
    std::vector<std::size_t> path;
    if (place(homeless, &path)) return true;

    // Displacement cycle: undo the chain, then rebuild with fresh functions.
    for (auto it = path.rbegin(); it != path.rend(); ++it) std::swap(homeless, keys_[*it]);

    std::vector<std::uint64_t> pending;
    pending.reserve(count_ + 1);
    for (std::size_t i = 0; i < used_.size(); ++i)
        if (used_[i]) pending.push_back(keys_[i]);
    pending.push_back(key);

    const auto saved_keys = keys_;
    const auto saved_used = used_;
    const auto saved_count = count_;
    const auto saved_hash = hash_;
    if (rebuild(std::move(pending))) return true;

    keys_ = saved_keys;
    used_ = saved_used;
    count_ = saved_count;
    hash_ = saved_hash;
    return false;
}

CuckooBuildResult cuckoo_build(std::span<const std::uint64_t> keys, const KeySchema& schema,
                               const CuckooConfig& config, std::uint64_t seed) {
    CuckooBuildResult result{false, 0, CuckooTable(schema, cuckoo_table_size(keys.size(), config.slack), config, seed)};
    result.success = true;
    for (auto key : keys) {
        if (!result.table.insert(key)) {
            result.success = false;
            break;
        }
    }
    result.retries = result.table.retries();
    return result;
}

}  // namespace tabhash
