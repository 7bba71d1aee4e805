#include "tabhash/filter_cascade.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tabhash/counter_rng.hpp"
#include "tabhash/errors.hpp"

namespace tabhash {
namespace {

std::uint64_t largest_power_of_two_below(long double target, bool strict) {
    std::uint64_t p = 1;
    if (strict ? !(1.0L < target) : !(1.0L <= target)) return 0;
    while (strict ? static_cast<long double>(p) * 2 < target : static_cast<long double>(p) * 2 <= target) p <<= 1;
    return p;
}

CuckooConfig with_default_capacity(CuckooConfig cfg, const CascadePlan& plan) {
    if (cfg.expected_keys == 0)
        cfg.expected_keys = static_cast<std::uint64_t>(std::ceil(2.0L * plan.epsilon * plan.n));
    return cfg;
}

}  // namespace

std::uint64_t CascadePlan::total_size() const noexcept {
    return std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
}

unsigned CascadePlan::filter_count_bound() const {
    const double l = std::log2(1.0 / epsilon);
    return static_cast<unsigned>(std::ceil(2.0 * l * l / delta - 1e-12));
}

CascadePlan plan_cascade(std::uint64_t n, double epsilon, double delta, bool strict_below) {
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("cascade: epsilon must be in (0, 1)");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("cascade: delta must be in (0, 1]");
    if (n < 16 || !std::has_single_bit(n)) throw std::invalid_argument("cascade: n must be a power of two >= 16");

    CascadePlan plan;
    plan.n = n;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.strict_below = strict_below;
    const long double log_inv_eps = std::log2(1.0L / epsilon);
    const long double floor_residual = static_cast<long double>(epsilon) * n;

    std::uint64_t residual = n;
    plan.residuals.push_back(residual);
    while (static_cast<long double>(residual) > floor_residual) {
        const long double target = delta * static_cast<long double>(residual) / log_inv_eps;
        const std::uint64_t size = largest_power_of_two_below(target, strict_below);
        if (size == 0)
            throw std::invalid_argument("cascade: filter " + std::to_string(plan.sizes.size()) +
                                        " would have fewer than one slot (target " + std::to_string(double(target)) +
                                        ")");
        plan.sizes.push_back(size);
        residual -= size;
        plan.residuals.push_back(residual);
    }
    if (plan.d() > plan.filter_count_bound())
        throw CheckFailure("cascade: " + std::to_string(plan.d()) + " filters exceed the bound " +
                           std::to_string(plan.filter_count_bound()));
    return plan;
}

std::string_view to_string(Placement::Kind kind) noexcept {
    switch (kind) {
        case Placement::Kind::Filter: return "filter";
        case Placement::Kind::Cuckoo: return "cuckoo";
        case Placement::Kind::Failed: return "failed";
    }
    return "unknown";
}

FilterCascade::FilterCascade(KeySchema schema, CascadePlan plan, CuckooConfig cuckoo, std::uint64_t seed)
    : schema_(schema),
      plan_(std::move(plan)),
      cuckoo_(schema, cuckoo_table_size(with_default_capacity(cuckoo, plan_).expected_keys, cuckoo.slack),
              with_default_capacity(cuckoo, plan_), derive2(seed, 1, 0)) {
    // Pack the filter functions into as few <= 64-bit tabulations as possible.
    std::vector<unsigned> widths;
    for (auto size : plan_.sizes) {
        if (!std::has_single_bit(size)) throw std::invalid_argument("cascade: filter sizes must be powers of two");
        widths.push_back(static_cast<unsigned>(std::countr_zero(size)));
    }
    unsigned used = 64;
    std::vector<unsigned> tab_bits;
    for (auto w : widths) {
        if (used + w > 64 || tab_bits.empty()) {
            tab_bits.push_back(0);
            used = 0;
        }
        views_.push_back({static_cast<unsigned>(tab_bits.size() - 1), used, w});
        used += w;
        tab_bits.back() = used;
    }
    for (std::size_t t = 0; t < tab_bits.size(); ++t)
        tabulations_.emplace_back(schema_, std::max(1u, tab_bits[t]), derive2(seed, 0, t));

    for (auto size : plan_.sizes) {
        cells_.emplace_back(size, 0);
        used_.emplace_back(size, 0);
    }
    stats_.filter_loads.assign(plan_.d(), 0);
}

void FilterCascade::hash_all(std::uint64_t key, std::vector<std::uint64_t>& out) const {
    out.resize(tabulations_.size());
    for (std::size_t t = 0; t < tabulations_.size(); ++t) out[t] = tabulations_[t].hash_unchecked(key);
}

std::uint64_t FilterCascade::slot_from(const std::vector<std::uint64_t>& hashed, unsigned filter) const {
    const View& v = views_[filter];
    return (hashed[v.tabulation] >> v.shift) & low_mask(v.bits);
}

std::uint64_t FilterCascade::filter_slot(unsigned filter, std::uint64_t key) const {
    if (filter >= plan_.d()) throw std::out_of_range("cascade: filter index out of range");
    schema_.require_key(key);
    std::vector<std::uint64_t> hashed;
    hash_all(key, hashed);
    return slot_from(hashed, filter);
}

std::optional<std::uint64_t> FilterCascade::filter_cell(unsigned filter, std::uint64_t slot) const {
    if (filter >= plan_.d() || slot >= plan_.sizes[filter]) throw std::out_of_range("cascade: cell out of range");
    if (!used_[filter][slot]) return std::nullopt;
    return cells_[filter][slot];
}

Placement FilterCascade::insert(std::uint64_t key) {
    schema_.require_key(key);
    std::vector<std::uint64_t> hashed;
    hash_all(key, hashed);
    for (unsigned i = 0; i < plan_.d(); ++i) {
        const std::uint64_t s = slot_from(hashed, i);
        if (!used_[i][s]) {
            used_[i][s] = 1;
            cells_[i][s] = key;
            ++stats_.filter_loads[i];
            return {Placement::Kind::Filter, i, s};
        }
    }
    ++stats_.overflow;
    const bool stored = cuckoo_.insert(key);
    stats_.cuckoo_retries = cuckoo_.retries();
    if (!stored) {
        ++stats_.failed;
        return {Placement::Kind::Failed, 0, 0};
    }
    ++stats_.cuckoo_stored;
    const unsigned t = *cuckoo_.find(key);
    return {Placement::Kind::Cuckoo, plan_.d() + t, cuckoo_.slot(t, key)};
}

std::vector<Placement> FilterCascade::build(std::span<const std::uint64_t> keys) {
    std::vector<Placement> out;
    out.reserve(keys.size());
    for (auto k : keys) out.push_back(insert(k));
    // Later insertions may have displaced or rehashed backstop keys.
    for (std::size_t j = 0; j < keys.size(); ++j)
        if (out[j].kind == Placement::Kind::Cuckoo) {
            const unsigned t = *cuckoo_.find(keys[j]);
            out[j] = {Placement::Kind::Cuckoo, plan_.d() + t, cuckoo_.slot(t, keys[j])};
        }
    return out;
}

std::optional<Placement> FilterCascade::lookup(std::uint64_t key) const {
    schema_.require_key(key);
    std::vector<std::uint64_t> hashed;
    hash_all(key, hashed);
    for (unsigned i = 0; i < plan_.d(); ++i) {
        const std::uint64_t s = slot_from(hashed, i);
        if (used_[i][s] && cells_[i][s] == key) return Placement{Placement::Kind::Filter, i, s};
    }
    if (auto t = cuckoo_.find(key)) return Placement{Placement::Kind::Cuckoo, plan_.d() + *t, cuckoo_.slot(*t, key)};
    return std::nullopt;
}

}  // namespace tabhash
