#include "tabhash/report_io.hpp"

#include <cmath>
#include <sstream>

#include "tabhash/version.hpp"

namespace tabhash {

using ojson = nlohmann::ordered_json;

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

namespace {

std::string csv_number(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    // Same shortest round-trip rendering as the JSON output.
    return ojson(v).dump();
}

std::string_view mode_name(QueryMode mode) { return mode == QueryMode::FixedBin ? "fixed-bin" : "query-ball"; }

}  // namespace

ojson RunManifest::to_json() const {
    ojson j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["master_seed"] = master_seed;
    j["tool_version"] = kToolVersion;
    j["outputs"] = outputs;
    return j;
}

ojson wrap_report(const RunManifest& manifest, ojson report) {
    ojson j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["manifest"] = manifest.to_json();
    j["report"] = std::move(report);
    return j;
}

ojson to_json(const OccupancyReport& r) {
    ojson j;
    j["family"] = std::string(to_string(r.family));
    j["m"] = r.m;
    j["n"] = r.n;
    j["c"] = r.c;
    j["trials"] = r.trials;
    ojson hist = ojson::array();
    for (auto [v, cnt] : r.histogram) hist.push_back({v, cnt});
    j["histogram"] = hist;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["mean_se"] = r.mean_se;
    j["variance_se"] = r.variance_se;
    j["hit"] = {{"mode", std::string(mode_name(r.query_mode))},
                {"target", r.target},
                {"hits", r.hits},
                {"p_hat", r.p_hat},
                {"se", r.p_se}};
    j["reference"] = {{"mu0", r.mu0}, {"p0", r.p0}, {"hit_gap_bound", r.hit_gap_bound}};
    j["whp"] = {{"gamma", r.gamma}, {"failure_probability", r.whp_failure}};
    j["bound_convention"] = "constant-free";
    ojson tails = ojson::array();
    for (const auto& row : r.tails) {
        tails.push_back({{"t", row.t},
                         {"upper_freq", row.upper_freq},
                         {"lower_freq", row.lower_freq},
                         {"general_upper", number_or_null(row.general_upper)},
                         {"general_lower", number_or_null(row.general_lower)},
                         {"sparse_upper", row.sparse_upper ? number_or_null(*row.sparse_upper) : ojson(nullptr)},
                         {"sparse_lower", row.sparse_lower ? number_or_null(*row.sparse_lower) : ojson(nullptr)}});
    }
    j["tails"] = tails;
    if (r.event) {
        const auto& e = *r.event;
        j["event"] = {{"kind", "table-collision"},
                      {"position", e.event.position},
                      {"span", e.event.span},
                      {"count", e.count},
                      {"frequency", e.frequency},
                      {"mean_given_event", e.mean_given_event},
                      {"variance_given_event", e.variance_given_event},
                      {"mean_given_no_event", e.mean_given_no_event},
                      {"variance_given_no_event", e.variance_given_no_event},
                      {"shift_z", e.shift_z}};
    }
    return j;
}

ojson to_json(const CollisionReport& r) {
    return {{"trials", r.trials},
            {"m", r.m},
            {"n", r.n},
            {"c", r.c},
            {"m0", r.m0},
            {"mean", r.mean},
            {"variance", r.variance},
            {"mean_se", r.mean_se},
            {"variance_se", r.variance_se},
            {"mean_bound", r.mean_bound},
            {"variance_bound", r.variance_bound}};
}

ojson to_json(const GroupOrdering& g) {
    ojson order = ojson::array();
    for (std::size_t i = 0; i < g.order.size(); ++i)
        order.push_back({{"position", g.order[i].position},
                         {"character", g.order[i].character},
                         {"group_size", g.groups[i].size()}});
    ojson j;
    j["m"] = g.m;
    j["c"] = g.schema.c();
    j["query"] = g.query ? ojson(*g.query) : ojson(nullptr);
    j["max_group_size"] = g.max_group_size();
    j["group_size_bound"] = g.group_size_bound();
    j["order"] = order;
    return j;
}

ojson to_json(const DependentTuples& t) {
    return {{"arity", t.arity},
            {"ordered_count", t.ordered_count},
            {"distinct_witnesses", t.distinct_witnesses},
            {"bound", t.bound ? number_or_null(*t.bound) : ojson(nullptr)}};
}

ojson to_json(const CascadePlan& p) {
    return {{"n", p.n},
            {"epsilon", p.epsilon},
            {"delta", p.delta},
            {"strict_below", p.strict_below},
            {"d", p.d()},
            {"d_bound", p.filter_count_bound()},
            {"sizes", p.sizes},
            {"residuals", p.residuals},
            {"total_size", p.total_size()}};
}

ojson to_json(const CascadeStats& s) {
    return {{"filter_loads", s.filter_loads},
            {"overflow", s.overflow},
            {"cuckoo_stored", s.cuckoo_stored},
            {"failed", s.failed},
            {"cuckoo_retries", s.cuckoo_retries}};
}

ojson to_json(const BloomParams& p) {
    return {{"m", p.m}, {"k", p.k}, {"n", p.n}, {"r", p.r}, {"multi_instance", p.multi_instance}};
}

ojson to_json(const FprMeasurement& f) {
    return {{"queries", f.queries},
            {"false_positives", f.false_positives},
            {"fpr", f.fpr},
            {"se", f.se},
            {"theoretical", f.theoretical},
            {"tabulation_bound", f.tabulation_bound},
            {"projected_bound", f.projected_bound}};
}

ojson to_json(const Rational& v) { return {{"num", v.num}, {"den", v.den}, {"value", v.value()}}; }

std::string tails_csv(const OccupancyReport& r) {
    std::ostringstream out;
    out << "t,upper_freq,lower_freq,general_upper,general_lower,sparse_upper,sparse_lower\n";
    for (const auto& row : r.tails) {
        out << csv_number(row.t) << ',' << csv_number(row.upper_freq) << ',' << csv_number(row.lower_freq) << ','
            << csv_number(row.general_upper) << ',' << csv_number(row.general_lower) << ','
            << (row.sparse_upper ? csv_number(*row.sparse_upper) : "") << ','
            << (row.sparse_lower ? csv_number(*row.sparse_lower) : "") << '\n';
    }
    return out.str();
}

std::string groups_csv(const GroupOrdering& g) {
    std::ostringstream out;
    out << "position,character,group_size\n";
    for (std::size_t i = 0; i < g.order.size(); ++i)
        out << g.order[i].position << ',' << g.order[i].character << ',' << g.groups[i].size() << '\n';
    return out.str();
}

}  // namespace tabhash
