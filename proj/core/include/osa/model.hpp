#pragma once

// Channel model, belief state and one-slot reward for multi-channel
// opportunistic sensing over i.i.d. two-state (busy/idle) Markov channels.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "osa/errors.hpp"

namespace osa {

/// Transition law shared by every channel. State 1 is idle, state 0 busy;
/// p00 = 1 - p01 and p10 = 1 - p11 are implied.
class ChannelModel {
 public:
  ChannelModel(double p01, double p11);

  double p01() const noexcept { return p01_; }
  double p11() const noexcept { return p11_; }
  bool positively_correlated() const noexcept { return p11_ >= p01_; }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

 private:
  double p01_;
  double p11_;
};

/// Per-channel conditional idle probabilities. Unordered; consumers sort.
class BeliefVector {
 public:
  explicit BeliefVector(std::vector<double> values);
  BeliefVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const BeliefVector&, const BeliefVector&) = default;
  friend auto operator<=>(const BeliefVector&, const BeliefVector&) = default;

 private:
  std::vector<double> values_;
};

/// The set of channels sensed in one slot, stored sorted ascending.
class SensingAction {
 public:
  explicit SensingAction(std::vector<int> channels);
  SensingAction(std::initializer_list<int> channels);

  std::size_t size() const noexcept { return channels_.size(); }
  int operator[](std::size_t i) const { return channels_[i]; }
  std::span<const int> channels() const noexcept { return channels_; }
  bool contains(int channel) const;

  /// Throws ContractError unless every index is in [0, n).
  void validate_for(std::size_t n) const;

  friend bool operator==(const SensingAction&, const SensingAction&) = default;
  friend auto operator<=>(const SensingAction&, const SensingAction&) = default;

 private:
  std::vector<int> channels_;
};

enum class ChannelState : std::uint8_t { busy = 0, idle = 1 };

/// Sensing outcome for each channel of the acting SensingAction.
using Observation = std::map<int, ChannelState>;

/// Outcome bitmask over an action: bit b is the state of action[b] (1 = idle).
using OutcomeMask = std::uint32_t;

enum class UtilityKind { at_least_one, count_idle };

/// One-step propagation of an unobserved channel: w*p11 + (1-w)*p01.
double tau(double omega, const ChannelModel& model);

/// Fixed point of tau, p01 / (p01 + 1 - p11). Throws SingularChainError for
/// p01 = 0, p11 = 1.
double stationary_belief(const ChannelModel& model);

/// The alternative prior p01 / (p01 + p11). Not a fixed point of tau in
/// general; kept so both readings of the prior are available.
double footnote_belief(const ChannelModel& model);

BeliefVector update_belief(const BeliefVector& belief, const SensingAction& action,
                           const Observation& obs, const ChannelModel& model);

/// Same update with the observation packed as an OutcomeMask.
BeliefVector update_belief(const BeliefVector& belief, const SensingAction& action,
                           OutcomeMask outcome, const ChannelModel& model);

double immediate_reward(const BeliefVector& belief, const SensingAction& action,
                        UtilityKind utility);

/// Probability of `outcome` given the sensed beliefs, multiplied left to
/// right over the action's channels.
double outcome_probability(const BeliefVector& belief, const SensingAction& action,
                           OutcomeMask outcome);

Observation to_observation(const SensingAction& action, OutcomeMask outcome);

}  // namespace osa
