#include "tabhash/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

#include "tabhash/counter_rng.hpp"
#include "tabhash/errors.hpp"

namespace tabhash {
namespace {

std::uint64_t pc_code(unsigned position, std::uint64_t ch) { return (ch << 6) | position; }

// Saturating exact power; nullopt on overflow of 128 bits.
std::optional<unsigned __int128> checked_pow(std::uint64_t base, unsigned exp) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && acc > (~static_cast<unsigned __int128>(0)) / base) return std::nullopt;
        acc *= base;
    }
    return acc;
}

double sample_variance(const std::vector<std::uint64_t>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    long double s = 0;
    for (auto x : xs) s += (x - static_cast<long double>(mean)) * (x - static_cast<long double>(mean));
    return static_cast<double>(s / (xs.size() - 1));
}

}  // namespace

std::vector<std::uint64_t> GroupOrdering::group_sizes() const {
    std::vector<std::uint64_t> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) sizes.push_back(g.size());
    return sizes;
}

std::uint64_t GroupOrdering::max_group_size() const {
    std::uint64_t best = 0;
    for (const auto& g : groups) best = std::max<std::uint64_t>(best, g.size());
    return best;
}

double GroupOrdering::group_size_bound() const {
    const double base = std::pow(static_cast<double>(m), 1.0 - 1.0 / schema.c());
    return query ? 2.0 * base : base;
}

bool within_group_bound(std::uint64_t g, std::uint64_t m, unsigned c, unsigned factor) {
    // g <= factor * m^((c-1)/c)  <=>  g^c <= factor^c * m^(c-1)
    const auto lhs = checked_pow(g, c);
    const auto f = checked_pow(factor, c);
    const auto mm = checked_pow(m, c - 1);
    if (lhs && f && mm && (*mm == 0 || *f <= (~static_cast<unsigned __int128>(0)) / *mm)) return *lhs <= *f * *mm;
    const long double l = c * std::log(static_cast<long double>(g));
    const long double rr = c * std::log(static_cast<long double>(factor)) + (c - 1) * std::log(static_cast<long double>(m));
    return l <= rr + 1e-15L * std::fabs(rr);
}

std::vector<std::vector<std::uint64_t>> groups_from_order(const KeySchema& schema,
                                                          std::span<const PositionCharacter> order,
                                                          std::span<const std::uint64_t> keys) {
    std::unordered_map<std::uint64_t, std::size_t> rank;
    rank.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        if (!rank.emplace(pc_code(order[i].position, order[i].character), i).second)
            throw std::invalid_argument("ordering lists a position character twice");
    std::vector<std::vector<std::uint64_t>> groups(order.size());
    for (auto key : keys) {
        std::size_t top = 0;
        for (unsigned p = 0; p < schema.c(); ++p) {
            auto it = rank.find(pc_code(p, schema.character(key, p)));
            if (it == rank.end()) throw std::invalid_argument("ordering misses a position character of a key");
            top = std::max(top, it->second);
        }
        groups[top].push_back(key);
    }
    return groups;
}

GroupOrdering compute_group_ordering(const KeySchema& schema, std::span<const std::uint64_t> keys,
                                     std::optional<std::uint64_t> query) {
    if (keys.empty()) throw std::invalid_argument("group ordering: key set is empty");
    for (auto k : keys) schema.require_key(k);
    {
        std::vector<std::uint64_t> sorted(keys.begin(), keys.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("group ordering: duplicate keys");
        if (query) {
            schema.require_key(*query);
            if (std::binary_search(sorted.begin(), sorted.end(), *query))
                throw std::invalid_argument("group ordering: query key must not be in the set");
        }
    }
    const unsigned c = schema.c();
    auto is_query_char = [&](unsigned p, std::uint64_t ch) { return query && schema.character(*query, p) == ch; };

    // Per position: character -> count among remaining keys, and (count, character) for selection.
    std::vector<std::map<std::uint64_t, std::uint32_t>> counts(c);
    std::vector<std::set<std::pair<std::uint32_t, std::uint64_t>>> by_freq(c);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> holders;
    for (std::uint32_t idx = 0; idx < keys.size(); ++idx)
        for (unsigned p = 0; p < c; ++p) {
            const std::uint64_t ch = schema.character(keys[idx], p);
            ++counts[p][ch];
            holders[pc_code(p, ch)].push_back(idx);
        }
    for (unsigned p = 0; p < c; ++p)
        for (auto [ch, cnt] : counts[p])
            if (!is_query_char(p, ch)) by_freq[p].emplace(cnt, ch);

    std::vector<std::uint8_t> removed(keys.size(), 0);
    std::size_t remaining = keys.size();
    std::vector<PositionCharacter> emitted;
    std::vector<std::vector<std::uint64_t>> emitted_groups;
    while (remaining > 0) {
        unsigned best = 0;
        for (unsigned p = 1; p < c; ++p)
            if (by_freq[p].size() > by_freq[best].size()) best = p;
        if (by_freq[best].empty()) throw CheckFailure("group ordering: no selectable character left");
        const std::uint64_t ch = by_freq[best].begin()->second;
        emitted.push_back({best, ch});
        auto& group = emitted_groups.emplace_back();
        for (auto idx : holders[pc_code(best, ch)]) {
            if (removed[idx]) continue;
            removed[idx] = 1;
            --remaining;
            group.push_back(keys[idx]);
            for (unsigned p = 0; p < c; ++p) {
                const std::uint64_t kc = schema.character(keys[idx], p);
                auto it = counts[p].find(kc);
                const bool selectable = !is_query_char(p, kc);
                if (selectable) by_freq[p].erase({it->second, kc});
                if (--it->second == 0) {
                    counts[p].erase(it);
                } else if (selectable) {
                    by_freq[p].emplace(it->second, kc);
                }
            }
        }
    }

    GroupOrdering out;
    out.schema = schema;
    out.query = query;
    out.m = keys.size();
    std::set<PositionCharacter> placed(emitted.begin(), emitted.end());
    if (query)
        for (unsigned p = 0; p < c; ++p) {
            const PositionCharacter pc{p, schema.character(*query, p)};
            out.order.push_back(pc);
            out.groups.emplace_back();
            placed.insert(pc);
        }
    std::set<PositionCharacter> idle;
    for (auto key : keys)
        for (unsigned p = 0; p < c; ++p) {
            const PositionCharacter pc{p, schema.character(key, p)};
            if (!placed.contains(pc)) idle.insert(pc);
        }
    for (const auto& pc : idle) {
        out.order.push_back(pc);
        out.groups.emplace_back();
    }
    for (std::size_t i = emitted.size(); i-- > 0;) {
        out.order.push_back(emitted[i]);
        out.groups.push_back(std::move(emitted_groups[i]));
    }

    // Independent re-derivation from the definition, then the size bound.
    auto derived = groups_from_order(schema, out.order, keys);
    for (std::size_t i = 0; i < derived.size(); ++i) {
        auto expect = out.groups[i];
        std::sort(expect.begin(), expect.end());
        std::sort(derived[i].begin(), derived[i].end());
        if (expect != derived[i])
            throw CheckFailure("group ordering: group of (" + std::to_string(out.order[i].position) + "," +
                               std::to_string(out.order[i].character) + ") disagrees with the definition");
    }
    const unsigned factor = query ? 2 : 1;
    for (std::size_t i = 0; i < out.groups.size(); ++i)
        if (!within_group_bound(out.groups[i].size(), out.m, c, factor))
            throw CheckFailure("group ordering: group of (" + std::to_string(out.order[i].position) + "," +
                               std::to_string(out.order[i].character) + ") has " +
                               std::to_string(out.groups[i].size()) + " keys, above the bound " +
                               std::to_string(out.group_size_bound()) + " for m = " + std::to_string(out.m));
    return out;
}

CollisionCount count_internal_collisions(const GroupOrdering& ordering, const BinFunction& bin) {
    CollisionCount cc;
    cc.per_group.reserve(ordering.groups.size());
    std::vector<std::uint64_t> bins;
    for (const auto& g : ordering.groups) {
        bins.clear();
        for (auto key : g) bins.push_back(bin(key));
        std::sort(bins.begin(), bins.end());
        std::uint64_t pairs = 0;
        for (std::size_t i = 0; i < bins.size();) {
            std::size_t j = i;
            while (j < bins.size() && bins[j] == bins[i]) ++j;
            pairs += (j - i) * (j - i - 1) / 2;
            i = j;
        }
        cc.per_group.push_back(pairs);
        cc.total += pairs;
    }
    return cc;
}

CollisionReport collision_experiment(const GroupOrdering& ordering, std::uint64_t n, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads) {
    if (n < 2 || !std::has_single_bit(n)) throw std::invalid_argument("collisions: n must be a power of two >= 2");
    if (trials == 0) throw std::invalid_argument("collisions: trials must be >= 1");
    const unsigned r = static_cast<unsigned>(std::countr_zero(n));
    CollisionReport rep;
    rep.trials = trials;
    rep.m = ordering.m;
    rep.n = n;
    rep.c = ordering.schema.c();
    const double md = static_cast<double>(rep.m), nd = static_cast<double>(n);
    rep.m0 = ordering.query ? std::min(md, ordering.group_size_bound()) : ordering.group_size_bound();
    rep.mean_bound = md * rep.m0 / (2.0 * nd);
    rep.variance_bound = (std::pow(3.0, rep.c) + 1.0) * md * md / nd + md * rep.m0 * rep.m0 / (nd * nd);

    rep.totals.assign(trials, 0);
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, trials));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t t = trials * w / workers; t < trials * (w + 1) / workers; ++t) {
                    const SimpleTabulation h(ordering.schema, r, derive(master_seed, t));
                    rep.totals[t] = count_internal_collisions(ordering, [&h](std::uint64_t k) {
                                        return h.hash_unchecked(k);
                                    }).total;
                }
            });
    }
    long double sum = 0;
    for (auto x : rep.totals) sum += x;
    rep.mean = static_cast<double>(sum / trials);
    rep.variance = sample_variance(rep.totals, rep.mean);
    long double m4 = 0;
    for (auto x : rep.totals) {
        const long double d = x - static_cast<long double>(rep.mean);
        m4 += d * d * d * d;
    }
    const double T = static_cast<double>(trials);
    rep.mean_se = std::sqrt(rep.variance / T);
    rep.variance_se = std::sqrt(std::max(0.0, static_cast<double>(m4 / trials) - rep.variance * rep.variance) / T);
    return rep;
}

DBoundedResult check_d_bounded(std::span<const std::vector<std::uint64_t>> groups, const BinFunction& bin,
                               std::uint64_t d) {
    std::vector<std::uint64_t> bins;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        bins.clear();
        for (auto key : groups[gi]) bins.push_back(bin(key));
        std::sort(bins.begin(), bins.end());
        for (std::size_t i = 0; i < bins.size();) {
            std::size_t j = i;
            while (j < bins.size() && bins[j] == bins[i]) ++j;
            if (j - i > d) return {false, gi, bins[i], j - i};
            i = j;
        }
    }
    return {};
}

double d_bounded_threshold(unsigned c, double gamma) {
    const double a = 2.0 * c * std::pow(3.0 + gamma, c);
    const double b = std::exp2(2.0 * c * (3.0 + gamma));
    return std::min(a, b);
}

DependentTuples find_dependent_tuples(const KeySchema& schema, std::span<const std::vector<std::uint64_t>> sets) {
    if (sets.empty()) throw std::invalid_argument("dependent tuples: need at least one key set");
    long double space = 1;
    for (const auto& s : sets) {
        for (auto k : s) schema.require_key(k);
        space *= static_cast<long double>(s.size());
    }
    if (space > static_cast<long double>(std::uint64_t{1} << 24))
        throw std::invalid_argument("dependent tuples: search space exceeds 2^24 tuples");

    DependentTuples out;
    out.arity = static_cast<unsigned>(sets.size());
    const std::size_t k = sets.size();
    if (k % 2 == 0) {
        long double dfact = 1;
        for (std::size_t v = k - 1; v >= 1; v -= 2) {
            dfact *= static_cast<long double>(v);
            if (v < 2) break;
        }
        long double b = std::pow(dfact, static_cast<long double>(schema.c()));
        for (const auto& s : sets) b *= std::sqrt(static_cast<long double>(s.size()));
        out.bound = static_cast<double>(b);
    }
    for (const auto& s : sets)
        if (s.empty()) return out;

    std::set<std::vector<std::uint64_t>> witnesses;
    std::vector<std::size_t> idx(k, 0);
    std::vector<std::uint64_t> tuple(k), chars(k);
    for (;;) {
        for (std::size_t i = 0; i < k; ++i) tuple[i] = sets[i][idx[i]];
        bool even = true;
        for (unsigned p = 0; p < schema.c() && even; ++p) {
            for (std::size_t i = 0; i < k; ++i) chars[i] = schema.character(tuple[i], p);
            std::sort(chars.begin(), chars.end());
            for (std::size_t i = 0; i < k; i += 2)
                if (i + 1 >= k || chars[i] != chars[i + 1]) {
                    even = false;
                    break;
                }
        }
        if (even) {
            ++out.ordered_count;
            auto sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) witnesses.insert(std::move(sorted));
        }
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == sets[pos].size()) idx[pos++] = 0;
        if (pos == k) break;
    }
    out.distinct_witnesses.assign(witnesses.begin(), witnesses.end());
    return out;
}

}  // namespace tabhash
