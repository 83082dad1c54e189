#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cli/config.hpp"
#include "osa/formulas.hpp"
#include "osa/search.hpp"

namespace osa::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kReproductionFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kBudgetExceeded = 3;

enum class OutputFormat { json, csv };

struct GlobalOptions {
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 100'000'000;
  FormulaVariant variant = FormulaVariant::corrected;
  OutputFormat output = OutputFormat::json;
};

struct CommandResult {
  int exit_code = kOk;
  std::string output;       // report document
  std::string diagnostics;  // for stderr
};

CommandResult cmd_eval(const RunConfig& cfg, const std::optional<std::string>& policy_override,
                       const GlobalOptions& g);

CommandResult cmd_reproduce(int id, const GlobalOptions& g);

struct VerifyOptions {
  std::string theorem;  // thm1 | thm2 | k1-cited | thm2-n5
  std::optional<double> grid_step;
  std::optional<double> p_step;
};
CommandResult cmd_verify(const VerifyOptions& v, const GlobalOptions& g);

struct SearchOptions {
  IntRange channels{6, 6};
  IntRange sense{3, 3};
  IntRange horizon{2, 2};
  PConstraint constraint = PConstraint::p11_ge_p01;
  UtilityKind utility = UtilityKind::at_least_one;
  double threshold = 1e-9;
  std::uint64_t trials = 1000;
};
CommandResult cmd_search(const SearchOptions& s, const GlobalOptions& g);

CommandResult cmd_simulate(const RunConfig& cfg, std::optional<std::uint64_t> episodes,
                           const GlobalOptions& g);

CommandResult cmd_errata(std::uint64_t instances, const GlobalOptions& g);

/// Parses "3" or "3..6".
IntRange parse_range(const std::string& text);
PConstraint parse_constraint(const std::string& text);

}  // namespace osa::cli
