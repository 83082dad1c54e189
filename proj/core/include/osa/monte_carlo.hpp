#pragma once

// Seeded simulation of channel trajectories and policy execution. Episode e
// draws from substream (seed, e), so results do not depend on thread count.

#include <cstdint>
#include <vector>

#include "osa/policy.hpp"
#include "osa/random.hpp"

namespace osa {

/// T x N matrix of channel states (1 = idle), row-major by slot.
class Trajectory {
 public:
  Trajectory(int horizon, int channels)
      : horizon_(horizon), channels_(channels),
        states_(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(channels), 0) {}

  int horizon() const noexcept { return horizon_; }
  int channels() const noexcept { return channels_; }
  bool idle(int slot, int channel) const { return states_[index(slot, channel)] != 0; }
  void set(int slot, int channel, bool idle) { states_[index(slot, channel)] = idle ? 1 : 0; }

 private:
  std::size_t index(int slot, int channel) const {
    return static_cast<std::size_t>(slot) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(channel);
  }
  int horizon_;
  int channels_;
  std::vector<std::uint8_t> states_;
};

struct SimulationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t episodes = 0;
  std::uint64_t seed = 0;
};

Trajectory sample_trajectory(const ExperimentConfig& cfg, RandomStream& rng);

/// Realized total reward of `policy` on `trajectory`; the belief is tracked
/// with update_belief from the observed states.
double run_episode(const ExperimentConfig& cfg, const PolicySpec& policy,
                   const Trajectory& trajectory, const EvalOptions& opts = {});

SimulationEstimate estimate(const ExperimentConfig& cfg, const PolicySpec& policy,
                            std::uint64_t episodes, std::uint64_t seed, unsigned jobs = 1,
                            const EvalOptions& opts = {});

}  // namespace osa
