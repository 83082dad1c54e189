#include "osa/monte_carlo.hpp"

#include <cmath>

#include "parallel.hpp"

namespace osa {

Trajectory sample_trajectory(const ExperimentConfig& cfg, RandomStream& rng) {
  cfg.validate();
  Trajectory traj(cfg.horizon, cfg.channels);
  for (int i = 0; i < cfg.channels; ++i) {
    bool idle = rng.bernoulli(cfg.initial_belief[static_cast<std::size_t>(i)]);
    traj.set(0, i, idle);
    for (int t = 1; t < cfg.horizon; ++t) {
      idle = rng.bernoulli(idle ? cfg.model.p11() : cfg.model.p01());
      traj.set(t, i, idle);
    }
  }
  return traj;
}

double run_episode(const ExperimentConfig& cfg, const PolicySpec& policy,
                   const Trajectory& trajectory, const EvalOptions& opts) {
  cfg.validate();
  if (trajectory.horizon() != cfg.horizon || trajectory.channels() != cfg.channels) {
    throw ContractError("trajectory dimensions do not match the configuration");
  }
  BeliefVector belief = cfg.initial_belief;
  PolicyCursor cursor(policy);
  double total = 0.0;
  for (int t = 0; t < cfg.horizon; ++t) {
    const SensingAction action = cursor.resolve(cfg, belief, cfg.horizon - t, opts);
    OutcomeMask outcome = 0;
    int idle_count = 0;
    for (std::size_t b = 0; b < action.size(); ++b) {
      if (trajectory.idle(t, action[b])) {
        outcome |= OutcomeMask{1} << b;
        ++idle_count;
      }
    }
    if (cfg.utility == UtilityKind::count_idle) {
      total += idle_count;
    } else if (idle_count > 0) {
      total += 1.0;
    }
    if (t + 1 < cfg.horizon) {
      belief = update_belief(belief, action, outcome, cfg.model);
      cursor = cursor.advance(outcome);
    }
  }
  return total;
}

SimulationEstimate estimate(const ExperimentConfig& cfg, const PolicySpec& policy,
                            std::uint64_t episodes, std::uint64_t seed, unsigned jobs,
                            const EvalOptions& opts) {
  cfg.validate();
  if (episodes < 2) throw ContractError("estimate needs at least two episodes");

  // Solve optimal parts once instead of per episode.
  const PolicySpec runnable =
      policy.uses_optimal() ? PolicySpec::explicit_tree(materialize(cfg, policy, opts)) : policy;

  std::vector<double> rewards(episodes, 0.0);
  detail::parallel_for(episodes, jobs, [&](std::size_t e) {
    RandomStream rng(seed, e);
    rewards[e] = run_episode(cfg, runnable, sample_trajectory(cfg, rng), opts);
  });

  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double n = static_cast<double>(episodes);
  const double mean = sum / n;
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n), episodes, seed};
}

}  // namespace osa
