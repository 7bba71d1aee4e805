#include "tabhash/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "tabhash/counter_rng.hpp"
#include "tabhash/range_projector.hpp"
#include "tabhash/tail_bounds.hpp"

namespace tabhash {
namespace {

constexpr std::uint64_t kMaxBins = std::uint64_t{1} << 28;

struct Partial {
    std::vector<std::uint64_t> histogram;
    std::uint64_t hits = 0;
    std::uint64_t event_count = 0;
    unsigned __int128 event_sum = 0;
    unsigned __int128 event_sumsq = 0;
};

bool table_collision(const SimpleTabulation& h, const CollisionEvent& ev) {
    auto table = h.table(ev.position);
    std::vector<std::uint64_t> values(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(ev.span));
    std::sort(values.begin(), values.end());
    return std::adjacent_find(values.begin(), values.end()) != values.end();
}

void run_range(const OccupancyConfig& cfg, const std::vector<std::uint64_t>& keys, std::uint64_t query_key,
               std::uint64_t begin, std::uint64_t end, Partial& out) {
    const unsigned r = cfg.family.out_bits;
    const RangeProjector projector(r, cfg.n);
    const bool identity = projector.is_identity();
    auto bin_of = [&](std::uint64_t y) { return identity ? y : projector(y); };

    std::vector<std::uint32_t> stamp(cfg.n, 0);
    std::uint32_t epoch = 0;
    out.histogram.assign(std::min<std::uint64_t>(keys.size(), cfg.n) + 1, 0);

    for (std::uint64_t trial = begin; trial < end; ++trial) {
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        const HashFamily family(cfg.family, derive(cfg.master_seed, trial));
        std::uint64_t occupied = 0;
        for (auto key : keys) {
            const std::uint64_t b = bin_of(family.eval_unchecked(key));
            if (stamp[b] != epoch) {
                stamp[b] = epoch;
                ++occupied;
            }
        }
        ++out.histogram[occupied];

        const std::uint64_t target =
            cfg.query_mode == QueryMode::FixedBin ? cfg.target_bin : bin_of(family.eval_unchecked(query_key));
        if (stamp[target] == epoch) ++out.hits;

        if (cfg.event && table_collision(*family.tabulation(), *cfg.event)) {
            ++out.event_count;
            out.event_sum += occupied;
            out.event_sumsq += static_cast<unsigned __int128>(occupied) * occupied;
        }
    }
}

}  // namespace

void OccupancyConfig::validate() const {
    family.validate();
    if (n == 0) throw std::invalid_argument("occupancy: n must be >= 1");
    if (n > kMaxBins) throw std::invalid_argument("occupancy: n must be <= 2^28");
    if (family.out_bits < 64 && n > (std::uint64_t{1} << family.out_bits))
        throw std::invalid_argument("occupancy: n = " + std::to_string(n) + " exceeds 2^r with r = " +
                                    std::to_string(family.out_bits));
    if (trials == 0) throw std::invalid_argument("occupancy: trials must be >= 1");
    if (query_mode == QueryMode::FixedBin && target_bin >= n)
        throw std::invalid_argument("occupancy: target bin must be < n");
    if (!(gamma > 0)) throw std::invalid_argument("occupancy: gamma must be positive");
    if (event) {
        if (family.kind != FamilyKind::SimpleTabulation)
            throw std::invalid_argument("occupancy: table-collision events need simple tabulation");
        if (event->position >= family.schema.c() || event->span < 2 ||
            event->span > family.schema.alphabet_size())
            throw std::invalid_argument("occupancy: collision event out of range");
    }
}

std::vector<double> default_tail_grid(std::uint64_t m, unsigned c) {
    const double unit = std::sqrt(std::pow(static_cast<double>(m), 2.0 - 1.0 / c));
    std::vector<double> grid;
    for (int i = 0; i <= 6; ++i) grid.push_back(unit * 0.5 * i);
    return grid;
}

HistogramMoments histogram_moments(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& histogram) {
    HistogramMoments mom;
    long double sum = 0;
    for (auto [v, cnt] : histogram) {
        mom.total += cnt;
        sum += static_cast<long double>(v) * cnt;
    }
    if (mom.total == 0) return mom;
    const long double mean = sum / mom.total;
    long double m2 = 0, m4 = 0;
    for (auto [v, cnt] : histogram) {
        const long double d = static_cast<long double>(v) - mean;
        m2 += d * d * cnt;
        m4 += d * d * d * d * cnt;
    }
    mom.mean = static_cast<double>(mean);
    mom.variance = mom.total > 1 ? static_cast<double>(m2 / (mom.total - 1)) : 0.0;
    mom.fourth_central = static_cast<double>(m4 / mom.total);
    return mom;
}

OccupancyReport run_occupancy(const OccupancyConfig& cfg) {
    cfg.validate();
    const KeySchema& schema = cfg.family.schema;
    const std::vector<std::uint64_t> keys = generate_keyset(cfg.keyset, schema);
    const std::uint64_t query_key = cfg.query_mode == QueryMode::QueryBall ? smallest_absent_key(keys, schema) : 0;

    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(cfg.threads == 0 ? 1 : cfg.threads, 1, cfg.trials));
    std::vector<Partial> partials(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = cfg.trials * w / workers, end = cfg.trials * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { run_range(cfg, keys, query_key, begin, end, partials[w]); });
        }
    }

    Partial total = std::move(partials[0]);
    for (unsigned w = 1; w < workers; ++w) {
        for (std::size_t i = 0; i < total.histogram.size(); ++i) total.histogram[i] += partials[w].histogram[i];
        total.hits += partials[w].hits;
        total.event_count += partials[w].event_count;
        total.event_sum += partials[w].event_sum;
        total.event_sumsq += partials[w].event_sumsq;
    }

    OccupancyReport rep;
    rep.m = keys.size();
    rep.n = cfg.n;
    rep.c = schema.c();
    rep.trials = cfg.trials;
    rep.family = cfg.family.kind;
    rep.query_mode = cfg.query_mode;
    rep.target = cfg.query_mode == QueryMode::FixedBin ? cfg.target_bin : query_key;
    for (std::size_t v = 0; v < total.histogram.size(); ++v)
        if (total.histogram[v] != 0) rep.histogram.emplace_back(v, total.histogram[v]);

    const HistogramMoments mom = histogram_moments(rep.histogram);
    const double T = static_cast<double>(cfg.trials);
    rep.mean = mom.mean;
    rep.variance = mom.variance;
    rep.mean_se = std::sqrt(mom.variance / T);
    rep.variance_se = std::sqrt(std::max(0.0, mom.fourth_central - mom.variance * mom.variance) / T);
    rep.hits = total.hits;
    rep.p_hat = static_cast<double>(total.hits) / T;
    rep.p_se = std::sqrt(rep.p_hat * (1.0 - rep.p_hat) / T);
    rep.p0 = static_cast<double>(p0(cfg.n, rep.m));
    rep.mu0 = static_cast<double>(mu0(cfg.n, rep.m));
    rep.hit_gap_bound = hit_probability_gap(cfg.n, rep.m, rep.c, cfg.query_mode == QueryMode::QueryBall);
    rep.gamma = cfg.gamma;
    rep.whp_failure = std::pow(static_cast<double>(cfg.n), -cfg.gamma);

    const std::vector<double> grid = cfg.tail_grid.empty() ? default_tail_grid(rep.m, rep.c) : cfg.tail_grid;
    for (double t : grid) {
        TailRow row;
        row.t = t;
        std::uint64_t upper = 0, lower = 0;
        for (auto [v, cnt] : rep.histogram) {
            if (static_cast<double>(v) >= rep.mu0 + t) upper += cnt;
            if (static_cast<double>(v) <= rep.mu0 - t) lower += cnt;
        }
        row.upper_freq = static_cast<double>(upper) / T;
        row.lower_freq = static_cast<double>(lower) / T;
        if (rep.m > 0) {
            row.general_upper = tail_bound(TailBound::GeneralUpper, rep.n, rep.m, rep.c, t / 2);
            row.general_lower = tail_bound(TailBound::GeneralLower, rep.n, rep.m, rep.c, t / 2);
            if (rep.m <= rep.n) {
                row.sparse_upper = tail_bound(TailBound::SparseUpper, rep.n, rep.m, rep.c, t);
                row.sparse_lower = tail_bound(TailBound::SparseLower, rep.n, rep.m, rep.c, t);
            }
        }
        rep.tails.push_back(row);
    }

    if (cfg.event) {
        EventStats ev;
        ev.event = *cfg.event;
        ev.count = total.event_count;
        ev.frequency = static_cast<double>(ev.count) / T;
        long double all_sum = 0, all_sumsq = 0;
        for (auto [v, cnt] : rep.histogram) {
            all_sum += static_cast<long double>(v) * cnt;
            all_sumsq += static_cast<long double>(v) * v * cnt;
        }
        const long double es = static_cast<long double>(total.event_sum);
        const long double ess = static_cast<long double>(total.event_sumsq);
        auto mean_var = [](long double s, long double ss, std::uint64_t k) -> std::pair<double, double> {
            if (k == 0) return {0.0, 0.0};
            const long double mean = s / k;
            const long double var = k > 1 ? (ss - s * mean) / (k - 1) : 0.0L;
            return {static_cast<double>(mean), static_cast<double>(std::max(0.0L, var))};
        };
        std::tie(ev.mean_given_event, ev.variance_given_event) = mean_var(es, ess, ev.count);
        std::tie(ev.mean_given_no_event, ev.variance_given_no_event) =
            mean_var(all_sum - es, all_sumsq - ess, cfg.trials - ev.count);
        const std::uint64_t rest = cfg.trials - ev.count;
        if (ev.count > 1 && rest > 1) {
            const double se = std::sqrt(ev.variance_given_event / ev.count + ev.variance_given_no_event / rest);
            if (se > 0) ev.shift_z = (ev.mean_given_no_event - ev.mean_given_event) / se;
        }
        rep.event = ev;
    }
    return rep;
}

}  // namespace tabhash
