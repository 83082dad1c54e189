#pragma once

// Key-value run configuration:
//
//   # comment
//   channels = 6
//   sense_k = 3
//   horizon_T = 2
//   p01 = 0.3
//   p11 = 0.5
//   initial_belief = [0.99, 0.5, 0.4, 0.39, 0.25, 0.25]   # or stationary | paper-footnote
//   utility = at-least-one                               # or count-idle
//   policy = myopic                                      # optimal | [0,1,3] | [[0,1,3],[0,1,2]]
//   seed = 42
//   episodes = 100000

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "osa/policy.hpp"

namespace osa::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ExperimentConfig experiment;
  /// "stationary", "paper-footnote" or "list".
  std::string belief_source = "list";
  /// "myopic", "optimal" or fixed actions per slot (then myopic).
  std::string policy_kind = "myopic";
  std::vector<SensingAction> fixed_actions;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> episodes;

  PolicySpec policy() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// Canonical text form; parsing it yields an identical RunConfig.
std::string format_run_config(const RunConfig& cfg);

/// Parses "myopic", "optimal" or an action list into `cfg`'s policy fields.
void set_policy(RunConfig& cfg, std::string_view text);

/// Shortest decimal that round-trips to `v`.
std::string shortest(double v);

std::string to_string(UtilityKind u);

}  // namespace osa::cli
