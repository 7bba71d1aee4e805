#pragma once
// JSON and CSV renderings of experiment reports. Field names are the
// documented report schema (see README).

#include <string>
#include <vector>

#include <json.hpp>

#include "tabhash/bloom.hpp"
#include "tabhash/diagnostics.hpp"
#include "tabhash/exact_oracle.hpp"
#include "tabhash/filter_cascade.hpp"
#include "tabhash/occupancy.hpp"

namespace tabhash {

/// Everything needed to reproduce a report. Identical manifests yield
/// byte-identical reports, so nothing run-dependent (timestamps, thread
/// counts) is stored here.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::uint64_t master_seed = 0;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
};

/// {"schema_version", "tool_version", "manifest", "report"}
nlohmann::ordered_json wrap_report(const RunManifest& manifest, nlohmann::ordered_json report);

nlohmann::ordered_json to_json(const OccupancyReport& report);
nlohmann::ordered_json to_json(const CollisionReport& report);
nlohmann::ordered_json to_json(const GroupOrdering& ordering);
nlohmann::ordered_json to_json(const DependentTuples& tuples);
nlohmann::ordered_json to_json(const CascadePlan& plan);
nlohmann::ordered_json to_json(const CascadeStats& stats);
nlohmann::ordered_json to_json(const BloomParams& params);
nlohmann::ordered_json to_json(const FprMeasurement& fpr);
nlohmann::ordered_json to_json(const Rational& value);

/// t,upper_freq,lower_freq,general_upper,general_lower,sparse_upper,sparse_lower
std::string tails_csv(const OccupancyReport& report);
/// position,character,group_size
std::string groups_csv(const GroupOrdering& ordering);

/// JSON numbers that may be non-finite are written as null.
nlohmann::ordered_json number_or_null(double v);

}  // namespace tabhash
