#include "osa/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <tuple>

#include "osa/formulas.hpp"
#include "osa/random.hpp"
#include "parallel.hpp"

namespace osa {

void SweepSpec::validate() const {
  auto check = [](const IntRange& r, const char* what) {
    if (r.lo < 1 || r.hi < r.lo) throw ContractError(std::string("invalid ") + what + " range");
  };
  check(channels, "channel");
  check(sense, "sense");
  check(horizon, "horizon");
  if (sense.hi > channels.lo) throw ContractError("sweep needs k <= N for every combination");
  for (const auto* levels : {&belief_levels, &p_levels}) {
    for (double v : *levels) {
      if (!(v >= 0.0 && v <= 1.0)) throw ContractError("grid level outside [0,1]");
    }
  }
  if (!(gap_threshold >= 0.0)) throw ContractError("gap threshold must be non-negative");
}

std::vector<double> grid_levels(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ContractError("grid step must lie in (0,1]");
  const long long m = std::llround(1.0 / step);
  if (std::abs(static_cast<double>(m) * step - 1.0) > 1e-9) {
    throw ContractError("grid step must divide 1");
  }
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(m) + 1);
  for (long long i = 0; i <= m; ++i) levels.push_back(static_cast<double>(i) / static_cast<double>(m));
  return levels;
}

bool p_pair_allowed(double p01, double p11, PConstraint constraint) {
  switch (constraint) {
    case PConstraint::p11_ge_p01: return p11 >= p01;
    case PConstraint::p11_lt_p01: return p11 < p01;
    case PConstraint::equal: return p11 == p01;
    case PConstraint::any: return true;
  }
  return false;
}

std::vector<std::vector<double>> sorted_belief_tuples(const std::vector<double>& levels, int n) {
  std::vector<double> desc(levels);
  std::sort(desc.begin(), desc.end(), std::greater<>());
  desc.erase(std::unique(desc.begin(), desc.end()), desc.end());

  std::vector<std::vector<double>> out;
  std::vector<double> current;
  std::function<void(std::size_t)> recurse = [&](std::size_t from) {
    if (current.size() == static_cast<std::size_t>(n)) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = from; i < desc.size(); ++i) {
      current.push_back(desc[i]);
      recurse(i);
      current.pop_back();
    }
  };
  recurse(0);
  return out;
}

bool finding_less(const Finding& a, const Finding& b) {
  auto key = [](const Finding& f) {
    return std::make_tuple(f.cfg.channels, f.cfg.sense, f.cfg.horizon, f.cfg.model.p01(),
                           f.cfg.model.p11());
  };
  if (key(a) != key(b)) return key(a) < key(b);
  if (a.cfg.initial_belief != b.cfg.initial_belief) {
    return a.cfg.initial_belief < b.cfg.initial_belief;
  }
  return a.gap < b.gap;
}

namespace {

Finding make_finding(const ExperimentConfig& cfg, double gap, const EvalOptions& opts) {
  return Finding{cfg, gap, PolicySpec::explicit_tree(optimal_value(cfg, opts).action_tree)};
}

}  // namespace

SweepResult sweep_verify(const SweepSpec& spec) {
  spec.validate();
  if (spec.belief_levels.empty() || spec.p_levels.empty()) {
    throw ContractError("grid sweep needs belief and p levels");
  }
  EvalOptions opts;
  opts.node_budget = spec.budget;
  opts.memoize = spec.memoize;

  std::vector<std::pair<double, double>> pairs;
  for (double p01 : spec.p_levels) {
    for (double p11 : spec.p_levels) {
      if (p_pair_allowed(p01, p11, spec.constraint)) pairs.emplace_back(p01, p11);
    }
  }

  SweepResult result;
  for (int n = spec.channels.lo; n <= spec.channels.hi; ++n) {
    const auto tuples = sorted_belief_tuples(spec.belief_levels, n);
    for (int k = spec.sense.lo; k <= spec.sense.hi; ++k) {
      for (int t = spec.horizon.lo; t <= spec.horizon.hi; ++t) {
        const std::uint64_t required = optimal_node_estimate(n, k, t);
        if (required > spec.budget) {
          result.complete = false;
          result.incomplete_reason = BudgetError(required, spec.budget).what();
          std::sort(result.findings.begin(), result.findings.end(), finding_less);
          return result;
        }
        const std::size_t items = tuples.size() * pairs.size();
        std::vector<double> gaps(items, 0.0);
        auto make_cfg = [&](std::size_t i) {
          const auto& [p01, p11] = pairs[i % pairs.size()];
          return ExperimentConfig{n, k, t, spec.utility, ChannelModel(p01, p11),
                                  BeliefVector(tuples[i / pairs.size()])};
        };
        detail::parallel_for(items, spec.jobs,
                             [&](std::size_t i) { gaps[i] = myopic_gap(make_cfg(i), opts); });
        for (std::size_t i = 0; i < items; ++i) {
          if (gaps[i] > spec.gap_threshold) {
            result.findings.push_back(make_finding(make_cfg(i), gaps[i], opts));
          }
        }
        result.instances += items;
      }
    }
  }
  std::sort(result.findings.begin(), result.findings.end(), finding_less);
  return result;
}

std::optional<Finding> random_search(const SweepSpec& spec, std::uint64_t seed,
                                     std::uint64_t trials) {
  spec.validate();
  if (trials < 1) throw ContractError("random search needs at least one trial");
  EvalOptions opts;
  opts.node_budget = spec.budget;
  opts.memoize = spec.memoize;

  auto draw = [&](std::uint64_t trial) {
    RandomStream rng(seed, trial);
    const int n = rng.uniform_int(spec.channels.lo, spec.channels.hi);
    const int k = rng.uniform_int(spec.sense.lo, std::min(spec.sense.hi, n));
    const int t = rng.uniform_int(spec.horizon.lo, spec.horizon.hi);
    std::vector<double> beliefs(static_cast<std::size_t>(n));
    for (auto& b : beliefs) b = rng.uniform();
    std::sort(beliefs.begin(), beliefs.end(), std::greater<>());
    double p01 = 0.0;
    double p11 = 0.0;
    do {
      const double u = rng.uniform();
      const double v = rng.uniform();
      switch (spec.constraint) {
        case PConstraint::p11_ge_p01: p01 = std::min(u, v); p11 = std::max(u, v); break;
        case PConstraint::p11_lt_p01: p01 = std::max(u, v); p11 = std::min(u, v); break;
        case PConstraint::equal: p01 = p11 = u; break;
        case PConstraint::any: p01 = u; p11 = v; break;
      }
    } while (!p_pair_allowed(p01, p11, spec.constraint));
    return ExperimentConfig{n, k, t, spec.utility, ChannelModel(p01, p11),
                            BeliefVector(std::move(beliefs))};
  };

  std::vector<double> gaps(trials, 0.0);
  detail::parallel_for(trials, spec.jobs,
                       [&](std::size_t i) { gaps[i] = myopic_gap(draw(i), opts); });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] > spec.gap_threshold && (!best || gaps[i] > gaps[*best])) best = i;
  }
  if (!best) return std::nullopt;
  return make_finding(draw(*best), gaps[*best], opts);
}

RegionSummary verify_identity_region(std::uint64_t instances, std::uint64_t seed) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double tol = 1e-12;
  RegionSummary s;
  s.min_third_gap = s.min_jth_gap = s.min_disjoint_gap = inf;

  auto track = [&](double& min_value, double v) {
    min_value = std::min(min_value, v);
    if (v < -tol) ++s.sign_violations;
  };

  for (std::uint64_t idx = 0; idx < instances; ++idx) {
    RandomStream rng(seed, idx);
    const int n = rng.uniform_int(3, 6);
    std::vector<double> beliefs(static_cast<std::size_t>(n));
    for (auto& b : beliefs) b = rng.uniform();
    std::sort(beliefs.begin(), beliefs.end(), std::greater<>());
    const double u = rng.uniform();
    const double v = rng.uniform();
    const ClosedFormInput in(BeliefVector(std::move(beliefs)),
                             ChannelModel(std::min(u, v), std::max(u, v)));

    const double r_star = myopic_two_slot_reward(in, FormulaVariant::corrected);
    track(s.min_third_gap, r_star - first_and_third_bound(in, FormulaVariant::corrected));
    for (int j = 3; j < n; ++j) {
      track(s.min_jth_gap, r_star - first_and_jth_bound(in, j, FormulaVariant::corrected));
    }
    for (int i = 2; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        track(s.min_disjoint_gap, r_star - disjoint_pair_bound(in, i, j, FormulaVariant::corrected));
      }
    }
    for (const auto& check : gap_identities(in)) {
      double& worst = check.j == 2 ? s.max_third_discrepancy : s.max_jth_discrepancy;
      worst = std::max(worst, check.discrepancy);
    }
    ++s.instances;
  }
  return s;
}

const char* to_string(PConstraint c) {
  switch (c) {
    case PConstraint::p11_ge_p01: return "p11-ge-p01";
    case PConstraint::p11_lt_p01: return "p11-lt-p01";
    case PConstraint::equal: return "equal";
    case PConstraint::any: return "any";
  }
  return "any";
}

}  // namespace osa
