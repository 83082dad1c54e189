#include "osa/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace osa {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

}  // namespace

ChannelModel::ChannelModel(double p01, double p11) : p01_(p01), p11_(p11) {
  require_probability(p01, "p01");
  require_probability(p11, "p11");
}

BeliefVector::BeliefVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractError("belief vector must have at least one channel");
  for (double v : values_) require_probability(v, "belief entry");
}

BeliefVector::BeliefVector(std::initializer_list<double> values)
    : BeliefVector(std::vector<double>(values)) {}

SensingAction::SensingAction(std::vector<int> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw ContractError("sensing action must name at least one channel");
  std::sort(channels_.begin(), channels_.end());
  if (std::adjacent_find(channels_.begin(), channels_.end()) != channels_.end()) {
    throw ContractError("sensing action has duplicate channels");
  }
  if (channels_.front() < 0) throw ContractError("negative channel index");
  // OutcomeMask is 32 bits wide.
  if (channels_.size() > 30) throw ContractError("at most 30 channels can be sensed per slot");
}

SensingAction::SensingAction(std::initializer_list<int> channels)
    : SensingAction(std::vector<int>(channels)) {}

bool SensingAction::contains(int channel) const {
  return std::binary_search(channels_.begin(), channels_.end(), channel);
}

void SensingAction::validate_for(std::size_t n) const {
  if (channels_.size() > n || static_cast<std::size_t>(channels_.back()) >= n) {
    throw ContractError("sensing action does not fit " + std::to_string(n) + " channels");
  }
}

double tau(double omega, const ChannelModel& model) {
  require_probability(omega, "omega");
  return omega * model.p11() + (1.0 - omega) * model.p01();
}

double stationary_belief(const ChannelModel& model) {
  const double denom = model.p01() + (1.0 - model.p11());
  if (denom == 0.0) {
    throw SingularChainError("p01 = 0 and p11 = 1: chain has no unique stationary belief");
  }
  return model.p01() / denom;
}

double footnote_belief(const ChannelModel& model) {
  const double denom = model.p01() + model.p11();
  if (denom == 0.0) throw SingularChainError("p01 + p11 = 0: footnote prior undefined");
  return model.p01() / denom;
}

BeliefVector update_belief(const BeliefVector& belief, const SensingAction& action,
                           OutcomeMask outcome, const ChannelModel& model) {
  action.validate_for(belief.size());
  std::vector<double> next(belief.size());
  for (std::size_t i = 0; i < belief.size(); ++i) next[i] = tau(belief[i], model);
  for (std::size_t b = 0; b < action.size(); ++b) {
    const bool idle = (outcome >> b) & 1U;
    next[static_cast<std::size_t>(action[b])] = idle ? model.p11() : model.p01();
  }
  return BeliefVector(std::move(next));
}

BeliefVector update_belief(const BeliefVector& belief, const SensingAction& action,
                           const Observation& obs, const ChannelModel& model) {
  if (obs.size() != action.size()) {
    throw ContractError("observation does not cover exactly the sensed channels");
  }
  OutcomeMask mask = 0;
  for (std::size_t b = 0; b < action.size(); ++b) {
    auto it = obs.find(action[b]);
    if (it == obs.end()) {
      throw ContractError("observation missing sensed channel " + std::to_string(action[b]));
    }
    if (it->second == ChannelState::idle) mask |= OutcomeMask{1} << b;
  }
  return update_belief(belief, action, mask, model);
}

double immediate_reward(const BeliefVector& belief, const SensingAction& action,
                        UtilityKind utility) {
  action.validate_for(belief.size());
  if (utility == UtilityKind::count_idle) {
    double sum = 0.0;
    for (int c : action.channels()) sum += belief[static_cast<std::size_t>(c)];
    return sum;
  }
  double all_busy = 1.0;
  for (int c : action.channels()) all_busy *= 1.0 - belief[static_cast<std::size_t>(c)];
  return 1.0 - all_busy;
}

double outcome_probability(const BeliefVector& belief, const SensingAction& action,
                           OutcomeMask outcome) {
  double p = 1.0;
  for (std::size_t b = 0; b < action.size(); ++b) {
    const double w = belief[static_cast<std::size_t>(action[b])];
    p *= ((outcome >> b) & 1U) ? w : 1.0 - w;
  }
  return p;
}

Observation to_observation(const SensingAction& action, OutcomeMask outcome) {
  Observation obs;
  for (std::size_t b = 0; b < action.size(); ++b) {
    obs[action[b]] = ((outcome >> b) & 1U) ? ChannelState::idle : ChannelState::busy;
  }
  return obs;
}

}  // namespace osa
