#pragma once
// Filter hashing: a cascade of power-of-two tables filled greedily (each key
// takes the first vacant slot among its d candidate slots) with a two-table
// cuckoo backstop for the keys that fall through every filter.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tabhash/cuckoo.hpp"
#include "tabhash/key_schema.hpp"
#include "tabhash/simple_tabulation.hpp"

namespace tabhash {

struct CascadePlan {
    std::uint64_t n = 0;
    double epsilon = 0;
    double delta = 0;
    bool strict_below = true;            ///< n_i < target (true) or n_i <= target
    std::vector<std::uint64_t> sizes;    ///< n_0 .. n_{d-1}, powers of two
    std::vector<std::uint64_t> residuals;  ///< m_0 = n, ..., m_d

    unsigned d() const noexcept { return static_cast<unsigned>(sizes.size()); }
    std::uint64_t total_size() const noexcept;
    /// ceil(2 log2(1/eps)^2 / delta)
    unsigned filter_count_bound() const;
};

/// n_i = largest power of two below delta * m_i / log2(1/eps); m_{i+1} = n - sum_{j<=i} n_j;
/// stops once m_{i+1} <= eps * n.
CascadePlan plan_cascade(std::uint64_t n, double epsilon, double delta, bool strict_below = true);

struct Placement {
    enum class Kind { Filter, Cuckoo, Failed };
    Kind kind = Kind::Failed;
    unsigned table = 0;  ///< 0..d-1 for filters, d or d+1 for the cuckoo tables
    std::uint64_t slot = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

std::string_view to_string(Placement::Kind kind) noexcept;

struct CascadeStats {
    std::vector<std::uint64_t> filter_loads;  ///< keys stored per filter
    std::uint64_t overflow = 0;               ///< keys that reached the backstop
    std::uint64_t cuckoo_stored = 0;
    std::uint64_t failed = 0;
    unsigned cuckoo_retries = 0;
};

class FilterCascade {
public:
    FilterCascade(KeySchema schema, CascadePlan plan, CuckooConfig cuckoo, std::uint64_t seed);

    const CascadePlan& plan() const noexcept { return plan_; }
    const CuckooTable& backstop() const noexcept { return cuckoo_; }

    /// Precondition: key not already stored. A backstop placement is only
    /// current until the next insertion, which may displace the key.
    Placement insert(std::uint64_t key);
    /// Inserts keys in the given order; returns the final placement of each key.
    std::vector<Placement> build(std::span<const std::uint64_t> keys);

    /// Probes all d + 2 tables.
    std::optional<Placement> lookup(std::uint64_t key) const;

    std::uint64_t filter_slot(unsigned filter, std::uint64_t key) const;
    std::optional<std::uint64_t> filter_cell(unsigned filter, std::uint64_t slot) const;

    const CascadeStats& stats() const noexcept { return stats_; }

private:
    struct View {
        unsigned tabulation;
        unsigned shift;
        unsigned bits;
    };

    std::uint64_t slot_from(const std::vector<std::uint64_t>& hashed, unsigned filter) const;
    void hash_all(std::uint64_t key, std::vector<std::uint64_t>& out) const;

    KeySchema schema_;
    CascadePlan plan_;
    std::vector<SimpleTabulation> tabulations_;
    std::vector<View> views_;
    std::vector<std::vector<std::uint64_t>> cells_;
    std::vector<std::vector<std::uint8_t>> used_;
    CuckooTable cuckoo_;
    CascadeStats stats_;
};

}  // namespace tabhash
