// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "tabhash/bloom.hpp"
#include "tabhash/counter_rng.hpp"
#include "tabhash/diagnostics.hpp"
#include "tabhash/errors.hpp"
#include "tabhash/exact_oracle.hpp"
#include "tabhash/filter_cascade.hpp"
#include "tabhash/keyset.hpp"
#include "tabhash/occupancy.hpp"
#include "tabhash/range_projector.hpp"
#include "tabhash/report_io.hpp"
#include "tabhash/tail_bounds.hpp"

using namespace tabhash;

namespace {

// Tolerances and sizes.
constexpr double kExactRuntimeLimitSeconds = 1.0;
constexpr double kHitSigmas = 3.0;
constexpr double kMeanSigmas = 4.0;
constexpr double kFprLow = 0.75;
constexpr double kFprHigh = 1.33;
constexpr double kCollisionMeanSigmas = 3.0;
constexpr double kCollisionVarianceSigmas = 4.0;
constexpr double kEventSigmas = 4.0;
constexpr double kShiftSigmas = 5.0;
constexpr double kOverflowPassRate = 0.99;
constexpr double kBackstopPassRate = 0.95;
constexpr unsigned kBackstopRetries = 10;
constexpr double kTailFrequency = 0.05;

constexpr std::uint64_t kOccupancyTrials = 100000;
constexpr std::uint64_t kAdversarialTrials = 200000;
constexpr std::uint64_t kBloomBuilds = 10;
constexpr std::uint64_t kBloomQueriesPerBuild = 1000000;
constexpr std::uint64_t kNoFalseNegativeBuilds = 100;
constexpr int kOrderingSets = 1000;
constexpr std::uint64_t kCollisionSeeds = 10000;
constexpr std::uint64_t kCascadeTrials = 100;
constexpr std::uint64_t kTailTrials = 10000;
constexpr int kTailKeySets = 3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

OccupancyConfig grid_config(FamilyKind family, unsigned threads) {
    OccupancyConfig cfg;
    cfg.keyset = KeySetSpec::grid(32, 32);
    cfg.family.kind = family;
    cfg.family.schema = KeySchema(2, 8);
    cfg.family.out_bits = 10;
    cfg.n = 1024;
    cfg.trials = kOccupancyTrials;
    cfg.master_seed = 20240601;
    cfg.target_bin = 0;
    cfg.threads = threads;
    return cfg;
}

Outcome exact_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const ExactInstance inst{KeySchema(2, 1), 2, 0};
    const std::vector<std::uint64_t> keys{0, 1, 2, 3};
    const Rational p = exact_hit_probability(inst, keys, 0);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // p0 = (n^m - (n-1)^m) / n^m with n = m = 4.
    const Rational ref = Rational::reduced(256 - 81, 256);
    // |p - p0| = |43*4 - 175| / 256.
    const std::int64_t diff_num = std::abs(static_cast<std::int64_t>(p.num * (256 / p.den)) - static_cast<std::int64_t>(ref.num));
    const Rational diff = Rational::reduced(static_cast<std::uint64_t>(diff_num), 256);
    const Rational gap_bound{1, 2};  // m^(3/2) / n^2 = 8/16
    const bool ok = p == Rational{43, 64} && ref == Rational{175, 256} && diff == Rational{3, 256} &&
                    diff.num * gap_bound.den <= gap_bound.num * diff.den && seconds < kExactRuntimeLimitSeconds;
    return {ok, "p=" + p.to_string() + " p0=" + ref.to_string() + " |p-p0|=" + diff.to_string() + " <= 1/2, " +
                    num(seconds * 1000, 3) + " ms"};
}

Outcome monte_carlo_hit(unsigned threads) {
    const auto rep = run_occupancy(grid_config(FamilyKind::SimpleTabulation, threads));
    const double dev = std::abs(rep.p_hat - rep.p0);
    const double allowed = rep.hit_gap_bound + kHitSigmas * rep.p_se;
    return {dev <= allowed, "p_hat=" + num(rep.p_hat) + " p0=" + num(rep.p0) + " |diff|=" + num(dev) +
                                " <= " + num(rep.hit_gap_bound) + " + 3*" + num(rep.p_se) + " = " + num(allowed)};
}

Outcome fully_random_mean(unsigned threads) {
    const auto rep = run_occupancy(grid_config(FamilyKind::FullyRandom, threads));
    const double dev = std::abs(rep.mean - rep.mu0);
    return {dev <= kMeanSigmas * rep.mean_se, "mean=" + num(rep.mean, 8) + " mu0=" + num(rep.mu0, 8) +
                                                   " |diff|=" + num(dev) + " <= 4*" + num(rep.mean_se)};
}

Outcome projector_exhaustive() {
    constexpr unsigned r = 12;
    constexpr std::uint64_t range = std::uint64_t{1} << r;
    std::vector<std::uint64_t> counts;
    std::uint64_t bad = 0;
    for (std::uint64_t n = 1; n <= range; ++n) {
        const RangeProjector p(r, n);
        counts.assign(n, 0);
        for (std::uint64_t y = 0; y < range; ++y) ++counts[p(y)];
        const std::uint64_t lo = range / n, hi = (range + n - 1) / n;
        for (std::uint64_t z = 0; z < n; ++z)
            if ((counts[z] != lo && counts[z] != hi) || p.preimage_size(z) != counts[z]) ++bad;
    }
    return {bad == 0, "n=1.." + std::to_string(range) + ", " + std::to_string(bad) + " bins off"};
}

Outcome bloom_fpr() {
    const KeySchema schema(4, 8);
    const BloomParams params = plan_bloom({1024, 10, {}, {}, true});
    if (params.n != 1477 || params.r != 22) return {false, "unexpected plan"};
    std::uint64_t queries = 0, positives = 0;
    for (std::uint64_t b = 0; b < kBloomBuilds; ++b) {
        const auto keys = generate_keyset(KeySetSpec::random(params.m, derive(7001, b)), schema);
        BloomFilter f(schema, params, derive(7002, b));
        for (auto k : keys) f.insert(k);
        const FprMeasurement m = measure_fpr(f, keys, kBloomQueriesPerBuild, derive(7003, b));
        queries += m.queries;
        positives += m.false_positives;
    }
    const double fpr = static_cast<double>(positives) / static_cast<double>(queries);
    const double ref = theoretical_fpr(params.k, params.n, params.m);
    const double ratio = fpr / ref;
    return {ratio >= kFprLow && ratio <= kFprHigh,
            "fpr=" + num(fpr) + " over " + std::to_string(queries) + " queries, p0^k=" + num(ref) +
                " ratio=" + num(ratio, 4)};
}

Outcome no_false_negatives() {
    const KeySchema schema(4, 8);
    const BloomParams params = plan_bloom({1024, 10, {}, {}, true});
    std::uint64_t misses = 0, exceptions = 0, checked = 0;
    for (std::uint64_t b = 0; b < kNoFalseNegativeBuilds; ++b) {
        try {
            const auto keys = generate_keyset(KeySetSpec::random(params.m, derive(8001, b)), schema);
            BloomFilter f(schema, params, derive(8002, b));
            for (auto k : keys) f.insert(k);
            for (auto k : keys) {
                ++checked;
                misses += !f.query(k);
            }
        } catch (const std::exception&) {
            ++exceptions;
        }
    }
    return {misses == 0 && exceptions == 0, std::to_string(checked) + " member queries, " + std::to_string(misses) +
                                                " misses, " + std::to_string(exceptions) + " exceptions"};
}

Outcome group_ordering() {
    CounterStream rng(9001);
    int sets = 0, failures = 0;
    double worst_ratio = 0;
    std::string first_failure;
    for (int i = 0; i < kOrderingSets; ++i) {
        const unsigned c = 2 + static_cast<unsigned>(rng.below(3));
        const unsigned cb = 3 + static_cast<unsigned>(rng.below(6));
        const KeySchema schema(c, cb);
        const std::uint64_t cap = std::min<std::uint64_t>(4096, schema.universe_size() - 1);
        const std::uint64_t m = 1 + rng.below(cap);
        const auto keys = generate_keyset(KeySetSpec::random(m, rng.next()), schema);
        for (bool with_query : {false, true}) {
            ++sets;
            try {
                std::optional<std::uint64_t> q;
                if (with_query) {
                    const std::unordered_set<std::uint64_t> members(keys.begin(), keys.end());
                    do q = rng.below(schema.universe_size());
                    while (members.contains(*q));
                }
                const GroupOrdering g = compute_group_ordering(schema, keys, q);
                const unsigned factor = with_query ? 2 : 1;
                for (auto size : g.group_sizes())
                    if (!within_group_bound(size, m, c, factor)) throw CheckFailure("bound violated");
                worst_ratio = std::max(worst_ratio, static_cast<double>(g.max_group_size()) / g.group_size_bound());
            } catch (const std::exception& e) {
                if (failures++ == 0) first_failure = e.what();
            }
        }
    }
    return {failures == 0, std::to_string(sets) + " orderings, " + std::to_string(failures) +
                               " violations, max group/bound=" + num(worst_ratio, 4) +
                               (first_failure.empty() ? "" : " first: " + first_failure)};
}

Outcome collision_moments(unsigned threads) {
    const KeySchema schema(2, 8);
    const auto keys = generate_keyset(KeySetSpec::grid(32, 32), schema);
    const GroupOrdering g = compute_group_ordering(schema, keys);
    const CollisionReport r = collision_experiment(g, 1024, kCollisionSeeds, 10001, threads);
    const bool mean_ok = r.mean <= r.mean_bound + kCollisionMeanSigmas * r.mean_se;
    const bool var_ok = r.variance <= r.variance_bound + kCollisionVarianceSigmas * r.variance_se;
    return {mean_ok && var_ok, "mean(C)=" + num(r.mean) + " <= " + num(r.mean_bound) + " + 3*" + num(r.mean_se) +
                                   ", var(C)=" + num(r.variance) + " <= " + num(r.variance_bound) + " + 4*" +
                                   num(r.variance_se)};
}

Outcome adversarial(unsigned threads) {
    // Hypercube product [2] x [512] needs a 9-bit second character.
    OccupancyConfig cube;
    cube.keyset = KeySetSpec::hypercube(1, 1024);
    cube.family.schema = KeySchema(2, 10);
    cube.family.out_bits = 10;
    cube.n = 1024;
    cube.trials = kAdversarialTrials;
    cube.master_seed = 11001;
    cube.event = CollisionEvent{0, 2};
    cube.threads = threads;
    const auto tab = run_occupancy(cube);

    OccupancyConfig random = cube;
    random.family.kind = FamilyKind::FullyRandom;
    random.event.reset();
    random.master_seed = 11002;
    const auto rnd = run_occupancy(random);

    const double p = 1.0 / 1024;
    const double event_sigma = std::sqrt(p * (1 - p) / static_cast<double>(tab.trials));
    const double event_dev = std::abs(tab.event->frequency - p);
    const bool event_ok = event_dev <= kEventSigmas * event_sigma;
    const double var_z = (tab.variance - rnd.variance) / std::hypot(tab.variance_se, rnd.variance_se);
    const bool var_ok = var_z >= kShiftSigmas;

    // Pair product [16] x [64]: a collision among T_0[0..16) merges two rows.
    OccupancyConfig pairs;
    pairs.keyset = KeySetSpec::pairs(64, 1024);
    pairs.family.schema = KeySchema(2, 8);
    pairs.family.out_bits = 10;
    pairs.n = 1024;
    pairs.trials = kAdversarialTrials;
    pairs.master_seed = 11003;
    pairs.event = CollisionEvent{0, 16};
    pairs.threads = threads;
    const auto pr = run_occupancy(pairs);
    const EventStats& ev = *pr.event;
    const double shift_se = std::sqrt(ev.variance_given_event / static_cast<double>(ev.count) +
                                      pr.variance / static_cast<double>(pr.trials));
    const double shift_z = (pr.mean - ev.mean_given_event) / shift_se;
    const bool shift_ok = ev.count > 0 && shift_z >= kShiftSigmas;

    return {event_ok && var_ok && shift_ok,
            "hcube: event freq=" + num(tab.event->frequency) + " vs 1/n (" + num(event_dev / event_sigma, 3) +
                " sigma); var tab=" + num(tab.variance) + " random=" + num(rnd.variance) + " z=" + num(var_z, 3) +
                "; pairs: mean|event=" + num(ev.mean_given_event) + " mean=" + num(pr.mean) + " z=" +
                num(shift_z, 3)};
}

Outcome filter_cascade() {
    constexpr std::uint64_t n = 65536;
    constexpr double eps = 0.125;
    const KeySchema schema(4, 8);
    const CascadePlan plan = plan_cascade(n, eps, 0.5);
    const bool plan_ok = plan.total_size() <= n && plan.d() <= plan.filter_count_bound();
    const auto overflow_cap = static_cast<std::uint64_t>(2 * eps * n);
    std::uint64_t overflow_ok = 0, backstop_ok = 0, lookup_errors = 0, worst_overflow = 0;
    unsigned worst_retries = 0;
    for (std::uint64_t t = 0; t < kCascadeTrials; ++t) {
        const auto keys = generate_keyset(KeySetSpec::random(n, derive(12001, t)), schema);
        FilterCascade fc(schema, plan, CuckooConfig{}, derive(12002, t));
        const auto placements = fc.build(keys);
        const CascadeStats& s = fc.stats();
        overflow_ok += s.overflow <= overflow_cap;
        backstop_ok += s.failed == 0 && s.cuckoo_stored == s.overflow && s.cuckoo_retries <= kBackstopRetries;
        worst_overflow = std::max(worst_overflow, s.overflow);
        worst_retries = std::max(worst_retries, s.cuckoo_retries);
        for (std::size_t j = 0; j < keys.size(); ++j) {
            const auto found = fc.lookup(keys[j]);
            if (placements[j].kind == Placement::Kind::Failed ? found.has_value() : found != placements[j])
                ++lookup_errors;
        }
    }
    const double overflow_rate = static_cast<double>(overflow_ok) / kCascadeTrials;
    const double backstop_rate = static_cast<double>(backstop_ok) / kCascadeTrials;
    return {plan_ok && overflow_rate >= kOverflowPassRate && backstop_rate >= kBackstopPassRate && lookup_errors == 0,
            "d=" + std::to_string(plan.d()) + "<=" + std::to_string(plan.filter_count_bound()) +
                " sum n_i=" + std::to_string(plan.total_size()) + "; overflow<=" + std::to_string(overflow_cap) +
                " in " + std::to_string(overflow_ok) + "/" + std::to_string(kCascadeTrials) +
                " (max " + std::to_string(worst_overflow) + "); backstop ok in " + std::to_string(backstop_ok) +
                "/" + std::to_string(kCascadeTrials) + " (max retries " + std::to_string(worst_retries) +
                "); lookup errors " + std::to_string(lookup_errors)};
}

Outcome tail_sanity(unsigned threads) {
    constexpr std::uint64_t n = 1024, m = 1024;
    constexpr unsigned c = 2;
    const double t_star = std::sqrt(2 * std::pow(static_cast<double>(m), 2.0 - 1.0 / c) * std::log(100.0));
    double worst = 0;
    for (int s = 0; s < kTailKeySets; ++s) {
        OccupancyConfig cfg;
        cfg.keyset = KeySetSpec::random(m, derive(13001, s));
        cfg.family.schema = KeySchema(c, 8);
        cfg.family.out_bits = 10;
        cfg.n = n;
        cfg.trials = kTailTrials;
        cfg.master_seed = derive(13002, s);
        cfg.tail_grid = {t_star};
        cfg.threads = threads;
        worst = std::max(worst, run_occupancy(cfg).tails.front().upper_freq);
    }
    bool monotone = true;
    for (auto which : {TailBound::GeneralUpper, TailBound::GeneralLower, TailBound::SparseUpper, TailBound::SparseLower})
        for (std::uint64_t nn : {std::uint64_t{1024}, std::uint64_t{4096}})
            for (unsigned cc : {1u, 2u, 3u, 4u}) {
                double prev = std::numeric_limits<double>::infinity();
                for (double t = 0; t <= 20000; t += 2.5) {
                    const double v = tail_bound(which, nn, m, cc, t);
                    if (v > prev) monotone = false;
                    prev = v;
                }
            }
    return {worst <= kTailFrequency && monotone, "t*=" + num(t_star, 5) + " max upper-tail freq=" + num(worst) +
                                                      " over " + std::to_string(kTailKeySets) + " key sets; curves " +
                                                      (monotone ? "monotone" : "NOT monotone")};
}

Outcome determinism() {
    auto bins_doc = [](unsigned threads) {
        OccupancyConfig cfg = grid_config(FamilyKind::SimpleTabulation, threads);
        cfg.trials = 20000;
        cfg.event = CollisionEvent{0, 8};
        cfg.query_mode = QueryMode::QueryBall;
        const RunManifest manifest{"bins", {{"keyset", cfg.keyset.to_string()}}, cfg.master_seed, {}};
        return wrap_report(manifest, to_json(run_occupancy(cfg))).dump(2);
    };
    auto diag_doc = [](unsigned threads) {
        const KeySchema schema(2, 8);
        const auto keys = generate_keyset(KeySetSpec::random(700, 5), schema);
        const GroupOrdering g = compute_group_ordering(schema, keys, smallest_absent_key(keys, schema));
        const RunManifest manifest{"diagnose", {{"keyset", "rand:700,5"}}, 5, {}};
        return wrap_report(manifest, {{"ordering", to_json(g)},
                                      {"collisions", to_json(collision_experiment(g, 512, 2000, 5, threads))}})
            .dump(2);
    };
    const std::string b1 = bins_doc(1), d1 = diag_doc(1);
    bool same = true;
    for (unsigned threads : {2u, 8u, 13u}) same = same && bins_doc(threads) == b1 && diag_doc(threads) == d1;
    return {same, "bins and diagnose reports compared at 1, 2, 8, 13 threads (" + std::to_string(b1.size()) + " + " +
                      std::to_string(d1.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite"};
    unsigned threads = 8;
    std::vector<int> only;
    app.add_option("--threads", threads, "worker threads for Monte Carlo criteria")->capture_default_str();
    app.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact hit probability on the four-key square", exact_oracle},
        {"Monte Carlo hit probability, grid 32x32", [&] { return monte_carlo_hit(threads); }},
        {"fully random baseline mean", [&] { return fully_random_mean(threads); }},
        {"most-uniform projector, r=12", projector_exhaustive},
        {"Bloom false-positive rate", bloom_fpr},
        {"Bloom has no false negatives", no_false_negatives},
        {"group ordering size bound", group_ordering},
        {"internal collision moments", [&] { return collision_moments(threads); }},
        {"adversarial non-concentration", [&] { return adversarial(threads); }},
        {"filter cascade with cuckoo backstop", filter_cascade},
        {"tail sanity and monotone bound curves", [&] { return tail_sanity(threads); }},
        {"byte-identical reports across worker counts", determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s %2d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), s);
        std::fflush(stdout);
    }
    return failed;
}
