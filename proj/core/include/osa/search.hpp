#pragma once

// Grid sweeps and seeded random search for instances where the myopic policy
// falls short of the optimum, plus a randomized check of the closed-form
// bounds used in the two-slot optimality argument.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osa/policy.hpp"

namespace osa {

enum class PConstraint { p11_ge_p01, p11_lt_p01, equal, any };

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct SweepSpec {
  IntRange channels{3, 3};
  IntRange sense{2, 2};
  IntRange horizon{2, 2};
  /// Belief values each channel may take; see grid_levels().
  std::vector<double> belief_levels;
  /// Values p01 and p11 may take (grid sweeps only).
  std::vector<double> p_levels;
  PConstraint constraint = PConstraint::any;
  UtilityKind utility = UtilityKind::at_least_one;
  double gap_threshold = 1e-9;
  std::uint64_t budget = 100'000'000;
  unsigned jobs = 1;
  bool memoize = false;

  /// Throws ContractError on empty ranges, k > N or out-of-range levels.
  void validate() const;
};

/// {0, step, 2 step, ..., 1}; step must divide 1 up to 1e-9 and lie in (0,1].
std::vector<double> grid_levels(double step);

struct Finding {
  ExperimentConfig cfg;
  double gap = 0.0;
  PolicySpec witness = PolicySpec::optimal();  // optimal action tree
};

struct SweepResult {
  std::vector<Finding> findings;
  std::uint64_t instances = 0;
  bool complete = true;
  std::string incomplete_reason;
};

bool p_pair_allowed(double p01, double p11, PConstraint constraint);

/// All non-increasing n-tuples drawn from `levels` (each multiset once).
std::vector<std::vector<double>> sorted_belief_tuples(const std::vector<double>& levels, int n);

SweepResult sweep_verify(const SweepSpec& spec);

/// Uniform draws of (N, k, T, beliefs, p01, p11) under the spec's ranges and
/// constraint. Returns the largest-gap Finding above the threshold, if any.
std::optional<Finding> random_search(const SweepSpec& spec, std::uint64_t seed,
                                     std::uint64_t trials);

struct RegionSummary {
  std::uint64_t instances = 0;
  double min_third_gap = 0.0;     // myopic - first_and_third bound
  double min_jth_gap = 0.0;       // myopic - first_and_jth bound, all j >= 3
  double min_disjoint_gap = 0.0;  // myopic - disjoint_pair bound, all 2 <= i < j
  std::uint64_t sign_violations = 0;  // any of the above below -1e-12
  double max_third_discrepancy = 0.0;
  double max_jth_discrepancy = 0.0;
};

/// Draws sorted beliefs (N in 3..6) and p11 >= p01 and summarizes the
/// closed-form bound differences and published identity discrepancies.
RegionSummary verify_identity_region(std::uint64_t instances, std::uint64_t seed);

bool finding_less(const Finding& a, const Finding& b);

const char* to_string(PConstraint c);

}  // namespace osa
