#include "cli/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "cli/config.hpp"

namespace osa::cli {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  double rounded = 0.0;
  std::from_chars(buf, ptr, rounded);
  // -0 prints as "-0.0"; normalize.
  return rounded == 0.0 ? 0.0 : rounded;
}

Json to_json(const SensingAction& a) {
  Json out = Json::array();
  for (int c : a.channels()) out.push_back(c);
  return out;
}

Json to_json(const BeliefVector& b) {
  Json out = Json::array();
  for (double v : b.values()) out.push_back(num(v));
  return out;
}

Json to_json(const ActionTree& tree) {
  if (!tree) return nullptr;
  Json node;
  node["action"] = to_json(tree->action);
  if (!tree->children.empty()) {
    // Child m follows outcome mask m: bit b set means action[b] was idle.
    Json children = Json::array();
    for (const auto& child : tree->children) children.push_back(to_json(child));
    node["children"] = std::move(children);
  }
  return node;
}

Json to_json(const ExperimentConfig& cfg) {
  Json out;
  out["channels"] = cfg.channels;
  out["sense_k"] = cfg.sense;
  out["horizon_T"] = cfg.horizon;
  out["p01"] = num(cfg.model.p01());
  out["p11"] = num(cfg.model.p11());
  out["initial_belief"] = to_json(cfg.initial_belief);
  out["utility"] = to_string(cfg.utility);
  return out;
}

Json to_json(const Finding& f) {
  Json out = to_json(f.cfg);
  out["gap"] = num(f.gap);
  const auto* tree = std::get_if<PolicySpec::Explicit>(&f.witness.rule());
  out["witness_first_action"] = tree ? to_json(tree->root->action) : Json(nullptr);
  out["witness_tree"] = tree ? to_json(tree->root) : Json(nullptr);
  return out;
}

Json to_json(const RegionSummary& s) {
  Json out;
  out["instances"] = s.instances;
  out["min_myopic_minus_first_and_third"] = num(s.min_third_gap);
  out["min_myopic_minus_first_and_jth"] = num(s.min_jth_gap);
  out["min_myopic_minus_disjoint_pair"] = num(s.min_disjoint_gap);
  out["sign_violations"] = s.sign_violations;
  out["max_discrepancy_first_and_third_identity"] = num(s.max_third_discrepancy);
  out["max_discrepancy_first_and_jth_identity"] = num(s.max_jth_discrepancy);
  return out;
}

Json report_header(const std::string& command) {
  Json out;
  out["tool"] = "osa";
  out["version"] = kToolVersion;
  out["command"] = command;
  return out;
}

std::string dump(const Json& report) { return report.dump(2) + "\n"; }

std::string findings_csv(const std::vector<Finding>& findings) {
  std::ostringstream out;
  out << "channels,sense_k,horizon_T,p01,p11,initial_belief,utility,gap,witness_first_action\n";
  auto join = [](const Json& arr) {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i) s += ";";
      s += arr[i].dump();
    }
    return s;
  };
  for (const auto& f : findings) {
    const Json j = to_json(f);
    out << j["channels"].dump() << ',' << j["sense_k"].dump() << ',' << j["horizon_T"].dump() << ','
        << j["p01"].dump() << ',' << j["p11"].dump() << ',' << join(j["initial_belief"]) << ','
        << to_string(f.cfg.utility) << ',' << j["gap"].dump() << ','
        << join(j["witness_first_action"]) << '\n';
  }
  return out.str();
}

}  // namespace osa::cli
