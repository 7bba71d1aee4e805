#pragma once
// Two-table cuckoo hashing with simple tabulation. Both slot functions are
// slices of one tabulation, so a key's two candidate slots cost one pass.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tabhash/key_schema.hpp"
#include "tabhash/simple_tabulation.hpp"

namespace tabhash {

struct CuckooConfig {
    double slack = 0.1;              ///< table size is the least power of two > (1 + slack) m'
    unsigned max_chain = 0;          ///< displacement limit; 0 selects 32 * log2(table size)
    unsigned max_retries = 10;       ///< rehashes allowed over the table's lifetime
    std::uint64_t expected_keys = 0; ///< m' used to size a backstop built incrementally; 0 = planner default

    void validate() const;
};

/// Least power of two strictly greater than (1 + slack) * keys.
std::uint64_t cuckoo_table_size(std::uint64_t keys, double slack);

class CuckooTable {
public:
    CuckooTable(KeySchema schema, std::uint64_t table_size, CuckooConfig config, std::uint64_t seed);

    /// Stores the key (no-op if already present). On a displacement cycle the
    /// table is rebuilt with fresh functions; if the retry budget runs out the
    /// table is restored to its state before the call and false is returned.
    bool insert(std::uint64_t key);

    /// 0 or 1 for the table holding the key.
    std::optional<unsigned> find(std::uint64_t key) const;
    bool contains(std::uint64_t key) const { return find(key).has_value(); }

    std::uint64_t slot(unsigned table, std::uint64_t key) const;
    std::optional<std::uint64_t> cell(unsigned table, std::uint64_t slot) const;

    std::uint64_t table_size() const noexcept { return size_; }
    std::uint64_t size() const noexcept { return count_; }
    unsigned retries() const noexcept { return retries_; }
    unsigned chain_limit() const noexcept { return chain_limit_; }

private:
    void reseed();
    // false leaves the homeless key in `key`; path records every swapped cell.
    bool place(std::uint64_t& key, std::vector<std::size_t>* path);
    bool rebuild(std::vector<std::uint64_t> keys);

    KeySchema schema_;
    std::uint64_t size_;
    unsigned bits_;
    CuckooConfig config_;
    std::uint64_t seed_;
    unsigned generation_ = 0;
    unsigned retries_ = 0;
    unsigned chain_limit_;
    std::uint64_t count_ = 0;
    SimpleTabulation hash_;
    std::vector<std::uint64_t> keys_;  // 2 * size_ cells, table t at [t * size_, (t + 1) * size_)
    std::vector<std::uint8_t> used_;
};

struct CuckooBuildResult {
    bool success = false;
    unsigned retries = 0;
    CuckooTable table;
};

/// Builds a table sized for keys.size() and inserts every key.
CuckooBuildResult cuckoo_build(std::span<const std::uint64_t> keys, const KeySchema& schema,
                               const CuckooConfig& config, std::uint64_t seed);

}  // namespace tabhash
