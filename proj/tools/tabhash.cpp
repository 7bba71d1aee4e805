// tabhash: occupancy experiments, exact oracles, Bloom and filter-hashing
// simulations, and diagnostics for simple tabulation hashing.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tabhash/bloom.hpp"
#include "tabhash/counter_rng.hpp"
#include "tabhash/diagnostics.hpp"
#include "tabhash/errors.hpp"
#include "tabhash/exact_oracle.hpp"
#include "tabhash/filter_cascade.hpp"
#include "tabhash/keyset.hpp"
#include "tabhash/occupancy.hpp"
#include "tabhash/report_io.hpp"
#include "tabhash/tail_bounds.hpp"
#include "tabhash/version.hpp"

using namespace tabhash;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCheckFailure = 3;

struct Common {
    unsigned c = 2;
    unsigned char_bits = 8;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
    bool record_time = false;

    std::uint64_t master_seed() const {
        if (seed) return *seed;
        if (const char* env = std::getenv("TABHASH_SEED")) {
            std::size_t used = 0;
            const std::string text(env);
            const std::uint64_t v = std::stoull(text, &used, 0);
            if (used != text.size()) throw std::invalid_argument("TABHASH_SEED is not an integer: " + text);
            return v;
        }
        return 0;
    }
    KeySchema schema() const { return KeySchema(c, char_bits); }
};

Common with_schema(unsigned c, unsigned char_bits) {
    Common common;
    common.c = c;
    common.char_bits = char_bits;
    return common;
}

void add_common(CLI::App* app, Common& common, bool with_threads) {
    app->add_option("--c", common.c, "characters per key")->capture_default_str();
    app->add_option("--char-bits", common.char_bits, "bits per character")->capture_default_str();
    app->add_option("--seed", common.seed, "master seed (default: $TABHASH_SEED, else 0)");
    if (with_threads) app->add_option("--threads", common.threads, "worker threads")->capture_default_str();
    app->add_option("--out", common.out, "JSON report path");
    app->add_flag("--record-time", common.record_time, "add wall-clock seconds to the manifest");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Common& common, RunManifest manifest, ojson report, const Timer& timer) {
    if (common.out.empty()) return;
    manifest.outputs.insert(manifest.outputs.begin(), common.out);
    ojson doc = wrap_report(manifest, std::move(report));
    if (common.record_time) doc["manifest"]["wall_clock_seconds"] = timer.seconds();
    write_text(common.out, doc.dump(2) + "\n");
}

ojson schema_json(const Common& common) { return {{"c", common.c}, {"char_bits", common.char_bits}}; }

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

// ---------------------------------------------------------------- bins

struct BinsArgs {
    Common common;
    unsigned r = 10;
    std::uint64_t n = 0;
    std::string keyset = "interval:1024";
    std::string family = "simple-tabulation";
    unsigned poly_k = 2;
    std::uint64_t trials = 1000;
    std::string query = "fixed";
    std::uint64_t target = 0;
    double gamma = 1.0;
    std::string event;
    std::vector<double> tail_grid;
    std::string csv;
};

CollisionEvent parse_event(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--event expects POS:SPAN, got " + text);
    try {
        return {static_cast<unsigned>(std::stoul(text.substr(0, colon))), std::stoull(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("--event expects POS:SPAN, got " + text);
    }
}

int run_bins(const BinsArgs& a) {
    const Timer timer;
    const std::uint64_t seed = a.common.master_seed();
    OccupancyConfig cfg;
    cfg.keyset = KeySetSpec::parse(a.keyset, seed);
    cfg.family.kind = parse_family_kind(a.family);
    cfg.family.schema = a.common.schema();
    cfg.family.out_bits = a.r;
    cfg.family.poly_k = a.poly_k;
    cfg.n = a.n == 0 ? (a.r < 64 ? std::uint64_t{1} << a.r : 0) : a.n;
    cfg.trials = a.trials;
    cfg.master_seed = seed;
    if (a.query == "fixed")
        cfg.query_mode = QueryMode::FixedBin;
    else if (a.query == "ball")
        cfg.query_mode = QueryMode::QueryBall;
    else
        throw std::invalid_argument("--query must be fixed or ball");
    cfg.target_bin = a.target;
    cfg.gamma = a.gamma;
    if (!a.event.empty()) cfg.event = parse_event(a.event);
    cfg.tail_grid = a.tail_grid;
    cfg.threads = a.common.threads;

    const OccupancyReport rep = run_occupancy(cfg);

    RunManifest manifest{"bins", schema_json(a.common), seed, {}};
    auto& p = manifest.parameters;
    p["r"] = a.r;
    p["n"] = cfg.n;
    p["keyset"] = cfg.keyset.to_string();
    p["family"] = std::string(to_string(cfg.family.kind));
    if (cfg.family.kind == FamilyKind::PolyK) p["poly_k"] = a.poly_k;
    p["trials"] = a.trials;
    p["query"] = a.query;
    if (cfg.query_mode == QueryMode::FixedBin) p["target"] = a.target;
    p["gamma"] = a.gamma;
    if (cfg.event) p["event"] = {{"position", cfg.event->position}, {"span", cfg.event->span}};
    if (!a.tail_grid.empty()) p["tail_grid"] = a.tail_grid;
    if (!a.csv.empty()) {
        write_text(a.csv, tails_csv(rep));
        manifest.outputs.push_back(a.csv);
    }
    emit(a.common, manifest, to_json(rep), timer);

    std::cout << "bins: m=" << rep.m << " n=" << rep.n << " trials=" << rep.trials << " mean=" << fmt(rep.mean)
              << " mu0=" << fmt(rep.mu0) << " p_hat=" << fmt(rep.p_hat) << " p0=" << fmt(rep.p0)
              << " |p_hat-p0|=" << fmt(std::abs(rep.p_hat - rep.p0)) << " gap_bound=" << fmt(rep.hit_gap_bound)
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- exact

struct ExactArgs {
    Common common = with_schema(2, 1);
    unsigned r = 2;
    std::uint64_t n = 0;
    std::string keyset = "all";
    std::uint64_t target = 0;
};

int run_exact(const ExactArgs& a) {
    const Timer timer;
    const std::uint64_t seed = a.common.master_seed();
    const ExactInstance inst{a.common.schema(), a.r, a.n};
    inst.validate();
    const KeySetSpec spec = KeySetSpec::parse(a.keyset, seed);
    const auto keys = generate_keyset(spec, inst.schema);
    if (a.target >= inst.bins()) throw std::invalid_argument("--target must be < n");

    const Rational p = exact_hit_probability(inst, keys, a.target);
    const auto law = exact_occupancy_distribution(inst, keys);
    const Rational mean = exact_mean_occupancy(inst, keys);
    const std::uint64_t m = keys.size();
    const double ref_p0 = static_cast<double>(p0(inst.bins(), m));
    const double gap = hit_probability_gap(inst.bins(), m, a.common.c);

    RunManifest manifest{"exact", schema_json(a.common), seed, {}};
    manifest.parameters["r"] = a.r;
    manifest.parameters["n"] = inst.bins();
    manifest.parameters["keyset"] = spec.to_string();
    manifest.parameters["target"] = a.target;

    ojson law_json = ojson::array();
    for (std::size_t v = 0; v < law.size(); ++v)
        if (law[v].num != 0) law_json.push_back({{"occupancy", v}, {"probability", to_json(law[v])}});
    ojson report{{"m", m},
                 {"n", inst.bins()},
                 {"c", a.common.c},
                 {"target", a.target},
                 {"hit_probability", to_json(p)},
                 {"p0", ref_p0},
                 {"abs_gap", std::abs(p.value() - ref_p0)},
                 {"hit_gap_bound", gap},
                 {"mean_occupancy", to_json(mean)},
                 {"mu0", static_cast<double>(mu0(inst.bins(), m))},
                 {"occupancy_law", law_json}};
    emit(a.common, manifest, report, timer);

    std::cout << "exact: p = " << p.to_string() << " = " << fmt(p.value(), 10) << "  p0 = " << fmt(ref_p0, 10)
              << "  |p-p0| = " << fmt(std::abs(p.value() - ref_p0), 6) << " <= " << fmt(gap) << "  E|h(X)| = "
              << mean.to_string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- bloom

struct BloomArgs {
    Common common = with_schema(4, 8);
    std::uint64_t m = 1024;
    unsigned k = 10;
    std::optional<std::uint64_t> n;
    std::optional<unsigned> r;
    bool multi = false;
    std::uint64_t queries = 1000000;
    std::string save;
};

int run_bloom(const BloomArgs& a) {
    const Timer timer;
    const std::uint64_t seed = a.common.master_seed();
    const KeySchema schema = a.common.schema();
    const BloomParams params = plan_bloom({a.m, a.k, a.n, a.r, a.multi});
    const auto members = generate_keyset(KeySetSpec::random(a.m, derive(seed, 0)), schema);
    BloomFilter filter(schema, params, derive(seed, 1));
    for (auto key : members) filter.insert(key);
    for (auto key : members)
        if (!filter.query(key)) throw CheckFailure("bloom: false negative for key " + std::to_string(key));
    const FprMeasurement fpr = measure_fpr(filter, members, a.queries, derive(seed, 2));

    RunManifest manifest{"bloom", schema_json(a.common), seed, {}};
    manifest.parameters["m"] = a.m;
    manifest.parameters["k"] = a.k;
    manifest.parameters["n"] = params.n;
    manifest.parameters["r"] = params.r;
    manifest.parameters["multi_instance"] = params.multi_instance;
    manifest.parameters["queries"] = a.queries;
    if (!a.save.empty()) {
        std::ofstream f(a.save, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open " + a.save + " for writing");
        filter.serialize(f);
        manifest.outputs.push_back(a.save);
    }
    ojson fill = ojson::array();
    for (unsigned j = 0; j < params.k; ++j) fill.push_back(filter.popcount(j));
    emit(a.common, manifest, {{"params", to_json(params)}, {"bits_set", fill}, {"fpr", to_json(fpr)}}, timer);

    std::cout << "bloom: m=" << a.m << " k=" << params.k << " n=" << params.n << " r=" << params.r
              << " fpr=" << fmt(fpr.fpr) << " (" << fpr.false_positives << "/" << fpr.queries
              << ") theory=" << fmt(fpr.theoretical) << " ratio=" << fmt(fpr.fpr / fpr.theoretical, 4) << "\n";
    return 0;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
    Common common = with_schema(4, 8);
    std::uint64_t n = 65536;
    double epsilon = 0.125;
    double delta = 0.5;
    bool non_strict = false;
    std::uint64_t trials = 1;
    double slack = 0.1;
    unsigned max_retries = 10;
    std::string dump_placement;
};

int run_filter(const FilterArgs& a) {
    const Timer timer;
    const std::uint64_t seed = a.common.master_seed();
    const KeySchema schema = a.common.schema();
    if (a.trials == 0) throw std::invalid_argument("--trials must be >= 1");
    const CascadePlan plan = plan_cascade(a.n, a.epsilon, a.delta, !a.non_strict);
    CuckooConfig cuckoo;
    cuckoo.slack = a.slack;
    cuckoo.max_retries = a.max_retries;
    cuckoo.validate();

    const auto overflow_cap = static_cast<std::uint64_t>(std::floor(2.0 * a.epsilon * static_cast<double>(a.n)));
    ojson trials = ojson::array();
    std::uint64_t within_overflow = 0, backstop_ok = 0, lookup_errors = 0;
    std::string placement_csv;
    for (std::uint64_t t = 0; t < a.trials; ++t) {
        const std::uint64_t trial_seed = derive(seed, t);
        const auto keys = generate_keyset(KeySetSpec::random(a.n, derive(trial_seed, 0)), schema);
        FilterCascade cascade(schema, plan, cuckoo, derive(trial_seed, 1));
        const auto placements = cascade.build(keys);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto found = cascade.lookup(keys[i]);
            if (placements[i].kind == Placement::Kind::Failed ? found.has_value() : found != placements[i])
                ++lookup_errors;
        }
        const CascadeStats& s = cascade.stats();
        if (s.overflow <= overflow_cap) ++within_overflow;
        if (s.failed == 0 && s.cuckoo_retries <= a.max_retries) ++backstop_ok;
        ojson row = to_json(s);
        row["trial"] = t;
        trials.push_back(row);
        if (t == 0 && !a.dump_placement.empty()) {
            std::ostringstream csv;
            csv << "key,kind,table,slot\n";
            for (std::size_t i = 0; i < keys.size(); ++i)
                csv << keys[i] << ',' << to_string(placements[i].kind) << ',' << placements[i].table << ','
                    << placements[i].slot << '\n';
            placement_csv = csv.str();
        }
    }
    if (lookup_errors != 0)
        throw CheckFailure("filter: " + std::to_string(lookup_errors) + " lookups disagree with placements");

    RunManifest manifest{"filter", schema_json(a.common), seed, {}};
    auto& p = manifest.parameters;
    p["n"] = a.n;
    p["epsilon"] = a.epsilon;
    p["delta"] = a.delta;
    p["strict_below"] = !a.non_strict;
    p["trials"] = a.trials;
    p["cuckoo_slack"] = a.slack;
    p["cuckoo_max_retries"] = a.max_retries;
    if (!a.dump_placement.empty()) {
        write_text(a.dump_placement, placement_csv);
        manifest.outputs.push_back(a.dump_placement);
    }
    ojson report{{"plan", to_json(plan)},
                 {"overflow_cap", overflow_cap},
                 {"trials_within_overflow_cap", within_overflow},
                 {"trials_backstop_ok", backstop_ok},
                 {"trials", trials}};
    emit(a.common, manifest, report, timer);

    std::cout << "filter: n=" << a.n << " d=" << plan.d() << " (bound " << plan.filter_count_bound()
              << ") total=" << plan.total_size() << " overflow<=2en in " << within_overflow << "/" << a.trials
              << " backstop ok in " << backstop_ok << "/" << a.trials << "\n";
    return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
    Common common;
    std::string keyset = "grid:32x32";
    std::string query;  // empty: none; "auto": smallest key not in X; else a key
    std::uint64_t n = 1024;
    std::uint64_t trials = 1000;
    unsigned tuple_arity = 0;
    std::string dump_groups;
};

int run_diagnose(const DiagnoseArgs& a) {
    const Timer timer;
    const std::uint64_t seed = a.common.master_seed();
    const KeySchema schema = a.common.schema();
    const KeySetSpec spec = KeySetSpec::parse(a.keyset, seed);
    const auto keys = generate_keyset(spec, schema);
    std::optional<std::uint64_t> q;
    if (a.query == "auto")
        q = smallest_absent_key(keys, schema);
    else if (!a.query.empty())
        q = std::stoull(a.query, nullptr, 0);

    const GroupOrdering ordering = compute_group_ordering(schema, keys, q);
    ojson report{{"ordering", to_json(ordering)}};
    std::optional<CollisionReport> coll;
    if (a.trials > 0) {
        coll = collision_experiment(ordering, a.n, a.trials, seed, a.common.threads);
        ojson cj = to_json(*coll);
        report["collisions"] = cj;
        report["d_threshold"] = d_bounded_threshold(schema.c(), 1.0);
    }
    if (a.tuple_arity > 0) {
        const std::vector<std::vector<std::uint64_t>> sets(a.tuple_arity, keys);
        report["dependent_tuples"] = to_json(find_dependent_tuples(schema, sets));
    }

    RunManifest manifest{"diagnose", schema_json(a.common), seed, {}};
    manifest.parameters["keyset"] = spec.to_string();
    manifest.parameters["query"] = q ? ojson(*q) : ojson(nullptr);
    manifest.parameters["n"] = a.n;
    manifest.parameters["trials"] = a.trials;
    if (a.tuple_arity > 0) manifest.parameters["tuple_arity"] = a.tuple_arity;
    if (!a.dump_groups.empty()) {
        write_text(a.dump_groups, groups_csv(ordering));
        manifest.outputs.push_back(a.dump_groups);
    }
    emit(a.common, manifest, report, timer);

    std::cout << "diagnose: m=" << ordering.m << " groups=" << ordering.order.size()
              << " max_group=" << ordering.max_group_size() << " bound=" << fmt(ordering.group_size_bound());
    if (coll)
        std::cout << " mean(C)=" << fmt(coll->mean) << " <= " << fmt(coll->mean_bound) << " var(C)="
                  << fmt(coll->variance) << " <= " << fmt(coll->variance_bound);
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    Common common;
    std::uint64_t n = 1024;
    std::uint64_t m = 1024;
    std::vector<double> t;
    double gamma = 1.0;
};

int run_bounds(const BoundsArgs& a) {
    const Timer timer;
    const unsigned c = a.common.c;
    if (c == 0) throw std::invalid_argument("--c must be >= 1");
    const auto grid = a.t.empty() ? default_tail_grid(a.m, c) : a.t;
    ojson rows = ojson::array();
    for (double t : grid) {
        ojson row{{"t", t}};
        for (auto which : {TailBound::GeneralUpper, TailBound::GeneralLower, TailBound::SparseUpper, TailBound::SparseLower}) {
            const bool sparse = which == TailBound::SparseUpper || which == TailBound::SparseLower;
            row[std::string(to_string(which))] =
                sparse && a.m > a.n ? ojson(nullptr) : number_or_null(tail_bound(which, a.n, a.m, c, t));
        }
        rows.push_back(row);
    }
    RunManifest manifest{"bounds", {{"c", c}}, a.common.master_seed(), {}};
    manifest.parameters["n"] = a.n;
    manifest.parameters["m"] = a.m;
    manifest.parameters["gamma"] = a.gamma;
    if (!a.t.empty()) manifest.parameters["t"] = a.t;
    const double ref_p0 = static_cast<double>(p0(a.n, a.m));
    const double gap = hit_probability_gap(a.n, a.m, c);
    ojson report{{"bound_convention", "constant-free"},
                 {"p0", ref_p0},
                 {"mu0", static_cast<double>(mu0(a.n, a.m))},
                 {"hit_gap_bound", gap},
                 {"hit_gap_bound_query", hit_probability_gap(a.n, a.m, c, true)},
                 {"whp_failure", std::pow(static_cast<double>(a.n), -a.gamma)},
                 {"d_threshold", d_bounded_threshold(c, a.gamma)},
                 {"tails", rows}};
    emit(a.common, manifest, report, timer);
    std::cout << "bounds: n=" << a.n << " m=" << a.m << " c=" << c << " p0=" << fmt(ref_p0)
              << " mu0=" << fmt(static_cast<double>(mu0(a.n, a.m))) << " gap=" << fmt(gap) << " rows=" << grid.size()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simple tabulation hashing experiments"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    BinsArgs bins;
    auto* cb = app.add_subcommand("bins", "Monte Carlo occupancy of a key set");
    add_common(cb, bins.common, true);
    cb->add_option("--r", bins.r, "hash value bits")->capture_default_str();
    cb->add_option("--n", bins.n, "bins (default 2^r)");
    cb->add_option("--keyset", bins.keyset, "grid:AxB | hcube:L,M | pairs:T,M | interval:M | rand:M[,SEED] | all")
        ->capture_default_str();
    cb->add_option("--family", bins.family, "simple-tabulation | fully-random | poly-k")->capture_default_str();
    cb->add_option("--poly-k", bins.poly_k, "independence of the polynomial family")->capture_default_str();
    cb->add_option("--trials", bins.trials)->capture_default_str();
    cb->add_option("--query", bins.query, "fixed (target bin) | ball (h of a key outside X)")->capture_default_str();
    cb->add_option("--target", bins.target, "target bin for --query fixed")->capture_default_str();
    cb->add_option("--gamma", bins.gamma, "failure exponent for n^-gamma")->capture_default_str();
    cb->add_option("--event", bins.event, "POS:SPAN, condition on a collision among T_POS[0..SPAN)");
    cb->add_option("--tail-t", bins.tail_grid, "deviations for the tail table");
    cb->add_option("--csv", bins.csv, "tail table CSV path");

    ExactArgs exact;
    auto* ce = app.add_subcommand("exact", "Exact occupancy law by enumerating every table filling");
    add_common(ce, exact.common, false);
    ce->add_option("--r", exact.r)->capture_default_str();
    ce->add_option("--n", exact.n, "bins (default 2^r)");
    ce->add_option("--keyset", exact.keyset)->capture_default_str();
    ce->add_option("--target", exact.target)->capture_default_str();

    BloomArgs bloom;
    auto* cl = app.add_subcommand("bloom", "Bloom filter false-positive measurement");
    add_common(cl, bloom.common, false);
    cl->add_option("--m", bloom.m, "keys inserted")->capture_default_str();
    cl->add_option("--k", bloom.k, "hash functions")->capture_default_str();
    cl->add_option("--n", bloom.n, "bits per array (default round(m/ln 2))");
    cl->add_option("--r", bloom.r, "bits per hash value (default: smallest r with 2^r >= n^2)");
    cl->add_flag("--multi-instance", bloom.multi, "allow k separate tabulations when k*r > 64");
    cl->add_option("--queries", bloom.queries)->capture_default_str();
    cl->add_option("--save", bloom.save, "write the binary filter here");

    FilterArgs filter;
    auto* cf = app.add_subcommand("filter", "Filter hashing cascade with a cuckoo backstop");
    add_common(cf, filter.common, false);
    cf->add_option("--n", filter.n, "keys (power of two)")->capture_default_str();
    cf->add_option("--epsilon", filter.epsilon)->capture_default_str();
    cf->add_option("--delta", filter.delta)->capture_default_str();
    cf->add_flag("--non-strict", filter.non_strict, "allow n_i equal to the sizing target");
    cf->add_option("--trials", filter.trials)->capture_default_str();
    cf->add_option("--cuckoo-slack", filter.slack)->capture_default_str();
    cf->add_option("--cuckoo-retries", filter.max_retries)->capture_default_str();
    cf->add_option("--dump-placement", filter.dump_placement, "CSV of key,kind,table,slot for trial 0");

    DiagnoseArgs diag;
    auto* cd = app.add_subcommand("diagnose", "Group ordering and internal collision statistics");
    add_common(cd, diag.common, true);
    cd->add_option("--keyset", diag.keyset)->capture_default_str();
    cd->add_option("--query", diag.query, "query key, or 'auto' for the smallest key not in X");
    cd->add_option("--n", diag.n, "bins (power of two)")->capture_default_str();
    cd->add_option("--trials", diag.trials, "collision trials (0 skips)")->capture_default_str();
    cd->add_option("--tuples", diag.tuple_arity, "search dependent tuples of this arity in X");
    cd->add_option("--dump-groups", diag.dump_groups, "CSV of position,character,group_size");

    BoundsArgs bounds;
    auto* cs = app.add_subcommand("bounds", "Constant-free reference curves");
    add_common(cs, bounds.common, false);
    cs->add_option("--n", bounds.n)->capture_default_str();
    cs->add_option("--m", bounds.m)->capture_default_str();
    cs->add_option("--t", bounds.t, "deviations (default grid)");
    cs->add_option("--gamma", bounds.gamma)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (cb->parsed()) return run_bins(bins);
        if (ce->parsed()) return run_exact(exact);
        if (cl->parsed()) return run_bloom(bloom);
        if (cf->parsed()) return run_filter(filter);
        if (cd->parsed()) return run_diagnose(diag);
        if (cs->parsed()) return run_bounds(bounds);
    } catch (const CheckFailure& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitCheckFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}
