#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "osa/search.hpp"

namespace osa::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// `v` rounded to 12 significant digits; non-finite values become null.
Json num(double v);

Json to_json(const SensingAction& a);
Json to_json(const BeliefVector& b);
Json to_json(const ActionTree& tree);
Json to_json(const ExperimentConfig& cfg);
Json to_json(const Finding& f);
Json to_json(const RegionSummary& s);

/// Header common to every report.
Json report_header(const std::string& command);

std::string dump(const Json& report);

/// Flat CSV of sweep findings, one row per finding.
std::string findings_csv(const std::vector<Finding>& findings);

}  // namespace osa::cli
