#pragma once

// Sensing policies and their exact finite-horizon evaluation.
//
// Evaluation is a full expectation over every sensing outcome: at each slot the
// policy's action earns its immediate reward, then the recursion branches over
// all 2^k idle/busy outcomes of the sensed channels (weighted by the beliefs),
// updates the belief and continues until the horizon is exhausted. Outcomes of
// probability exactly zero are skipped. Branches are summed in ascending
// outcome-mask order, so results are bitwise reproducible.

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "osa/model.hpp"

namespace osa {

struct ExperimentConfig {
  int channels = 0;  // N
  int sense = 0;     // k
  int horizon = 0;   // T
  UtilityKind utility = UtilityKind::at_least_one;
  ChannelModel model{0.0, 0.0};
  BeliefVector initial_belief{0.0};

  /// Throws ContractError unless 1 <= k <= N, T >= 1 and the belief has N entries.
  void validate() const;
};

/// Node of an explicit policy tree. A node used with r slots remaining has
/// 2^k children (indexed by OutcomeMask) when r > 1 and none when r = 1.
/// A null child marks a branch the tree does not cover; it is an error to
/// reach it with positive probability.
struct ActionNode {
  SensingAction action;
  std::vector<std::shared_ptr<const ActionNode>> children;
};

using ActionTree = std::shared_ptr<const ActionNode>;

/// Number of slots an explicit tree covers along its deepest branch.
int tree_depth(const ActionTree& tree);

class PolicySpec {
 public:
  struct Myopic {};
  struct Optimal {};
  struct FixedFirst {
    SensingAction action;
    std::shared_ptr<const PolicySpec> then;
  };
  struct Explicit {
    ActionTree root;
  };

  static PolicySpec myopic() { return PolicySpec(Myopic{}); }
  static PolicySpec optimal() { return PolicySpec(Optimal{}); }
  static PolicySpec fixed_first(SensingAction action, PolicySpec then);
  static PolicySpec explicit_tree(ActionTree root);

  const auto& rule() const noexcept { return rule_; }

  bool is_myopic() const noexcept { return std::holds_alternative<Myopic>(rule_); }
  bool uses_optimal() const;

 private:
  using Rule = std::variant<Myopic, Optimal, FixedFirst, Explicit>;
  explicit PolicySpec(Rule rule) : rule_(std::move(rule)) {}
  Rule rule_;
};

struct EvaluationReport {
  double total_expected_reward = 0.0;
  double average_reward = 0.0;
  std::vector<double> per_slot;
  ActionTree action_tree;  // set by optimal_value only
};

struct EvalOptions {
  std::uint64_t node_budget = 100'000'000;
  /// Cache optimal values by (remaining horizon, sorted belief). Valid because
  /// channels are i.i.d.; only used by value-only optimisation.
  bool memoize = false;
};

/// The k channels with largest belief, ties broken by ascending index.
SensingAction myopic_action(const BeliefVector& belief, int k);

/// All C(n, k) actions in lexicographic order.
std::vector<SensingAction> all_actions(int n, int k);

/// (C(N,k) * 2^k)^T, saturating at UINT64_MAX.
std::uint64_t optimal_node_estimate(int channels, int sense, int horizon);

EvaluationReport evaluate_policy(const ExperimentConfig& cfg, const PolicySpec& policy,
                                 const EvalOptions& opts = {});

/// Brute-force optimum with an argmax action tree (lexicographically smallest
/// action among exact ties).
EvaluationReport optimal_value(const ExperimentConfig& cfg, const EvalOptions& opts = {});

/// Optimal expected total reward without building the tree.
double optimal_total(const ExperimentConfig& cfg, const EvalOptions& opts = {});

/// optimal_total - myopic total, negatives within 1e-12 clamped to zero.
double myopic_gap(const ExperimentConfig& cfg, const EvalOptions& opts = {});

/// Plays `first_action` at slot 0, the myopic action at slot 1 and an optimal
/// continuation afterwards, as an explicit tree. Requires T >= 3.
PolicySpec build_remark_policy(const ExperimentConfig& cfg, const SensingAction& first_action,
                               const EvalOptions& opts = {});

/// A position inside a policy while it is being executed. Myopic and fixed
/// rules are applied on the fly; optimal positions are solved (and turned
/// into an explicit tree) the first time they are resolved.
class PolicyCursor {
 public:
  /// `policy` must outlive the cursor and every cursor derived from it.
  explicit PolicyCursor(const PolicySpec& policy) : spec_(&policy) {}

  SensingAction resolve(const ExperimentConfig& cfg, const BeliefVector& belief, int remaining,
                        const EvalOptions& opts = {});

  /// Position for the next slot given the outcome of the resolved action.
  PolicyCursor advance(OutcomeMask outcome) const;

 private:
  PolicyCursor() = default;
  const PolicySpec* spec_ = nullptr;
  ActionTree node_;
};

/// Expands any policy into an explicit tree for cfg's initial belief.
/// Zero-probability branches are left null.
ActionTree materialize(const ExperimentConfig& cfg, const PolicySpec& policy,
                       const EvalOptions& opts = {});

}  // namespace osa
