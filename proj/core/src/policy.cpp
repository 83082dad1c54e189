#include "osa/policy.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace osa {

void ExperimentConfig::validate() const {
  if (channels < 1) throw ContractError("channel count must be at least 1");
  if (sense < 1 || sense > channels) throw ContractError("sense count must satisfy 1 <= k <= N");
  if (horizon < 1) throw ContractError("horizon must be at least 1");
  if (initial_belief.size() != static_cast<std::size_t>(channels)) {
    throw ContractError("initial belief has " + std::to_string(initial_belief.size()) +
                        " entries, expected " + std::to_string(channels));
  }
}

int tree_depth(const ActionTree& tree) {
  if (!tree) return 0;
  int deepest = 0;
  for (const auto& child : tree->children) deepest = std::max(deepest, tree_depth(child));
  return 1 + deepest;
}

PolicySpec PolicySpec::fixed_first(SensingAction action, PolicySpec then) {
  return PolicySpec(
      FixedFirst{std::move(action), std::make_shared<const PolicySpec>(std::move(then))});
}

PolicySpec PolicySpec::explicit_tree(ActionTree root) {
  if (!root) throw ContractError("explicit policy tree is empty");
  return PolicySpec(Explicit{std::move(root)});
}

bool PolicySpec::uses_optimal() const {
  if (std::holds_alternative<Optimal>(rule_)) return true;
  if (const auto* f = std::get_if<FixedFirst>(&rule_)) return f->then->uses_optimal();
  return false;
}

SensingAction myopic_action(const BeliefVector& belief, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > belief.size()) {
    throw ContractError("myopic action needs 1 <= k <= N");
  }
  std::vector<int> order(belief.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return belief[static_cast<std::size_t>(a)] > belief[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(k));
  return SensingAction(std::move(order));
}

std::vector<SensingAction> all_actions(int n, int k) {
  if (k < 1 || k > n) throw ContractError("actions need 1 <= k <= N");
  std::vector<SensingAction> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    out.emplace_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::uint64_t optimal_node_estimate(int channels, int sense, int horizon) {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (a != 0 && b > cap / a) return cap;
    return a * b;
  };
  std::uint64_t per_level = 1;
  // C(N,k) computed incrementally stays integral at every step.
  for (int i = 1; i <= sense; ++i) {
    per_level = mul(per_level, static_cast<std::uint64_t>(channels - sense + i));
    if (per_level == cap) break;
    per_level /= static_cast<std::uint64_t>(i);
  }
  per_level = mul(per_level, sense >= 64 ? cap : (std::uint64_t{1} << sense));
  std::uint64_t total = 1;
  for (int t = 0; t < horizon; ++t) total = mul(total, per_level);
  return total;
}

namespace {

void check_budget(const ExperimentConfig& cfg, int remaining, const EvalOptions& opts) {
  const std::uint64_t required = optimal_node_estimate(cfg.channels, cfg.sense, remaining);
  if (required > opts.node_budget) throw BudgetError(required, opts.node_budget);
}

// Exhaustive optimisation over every action at every reachable belief.
class OptimalSolver {
 public:
  OptimalSolver(const ExperimentConfig& cfg, const EvalOptions& opts)
      : cfg_(cfg), opts_(opts), actions_(all_actions(cfg.channels, cfg.sense)) {}

  double value(const BeliefVector& belief, int remaining) {
    if (remaining == 0) return 0.0;
    if (opts_.memoize) {
      std::vector<double> key(belief.values().begin(), belief.values().end());
      std::sort(key.begin(), key.end(), std::greater<>());
      auto& level = memo_[remaining];
      if (auto it = level.find(key); it != level.end()) return it->second;
      const double v = solve(belief, remaining, nullptr);
      level.emplace(std::move(key), v);
      return v;
    }
    return solve(belief, remaining, nullptr);
  }

  std::pair<double, ActionTree> tree(const BeliefVector& belief, int remaining) {
    ActionTree node;
    const double v = solve(belief, remaining, &node);
    return {v, std::move(node)};
  }

 private:
  double solve(const BeliefVector& belief, int remaining, ActionTree* out) {
    double best = -std::numeric_limits<double>::infinity();
    const SensingAction* best_action = nullptr;
    std::vector<ActionTree> best_children;
    std::vector<ActionTree> children;
    const OutcomeMask outcomes = OutcomeMask{1} << cfg_.sense;

    for (const auto& action : actions_) {
      const double reward = immediate_reward(belief, action, cfg_.utility);
      double continuation = 0.0;
      if (remaining > 1) {
        if (out) children.assign(outcomes, nullptr);
        for (OutcomeMask m = 0; m < outcomes; ++m) {
          const double p = outcome_probability(belief, action, m);
          if (p == 0.0) continue;
          const BeliefVector next = update_belief(belief, action, m, cfg_.model);
          if (out) {
            auto [v, child] = tree(next, remaining - 1);
            continuation += p * v;
            children[m] = std::move(child);
          } else {
            continuation += p * value(next, remaining - 1);
          }
        }
      }
      const double total = reward + continuation;
      if (total > best) {
        best = total;
        best_action = &action;
        if (out) best_children.swap(children);
      }
    }
    if (out) {
      *out = std::make_shared<const ActionNode>(ActionNode{*best_action, std::move(best_children)});
    }
    return best;
  }

  const ExperimentConfig& cfg_;
  const EvalOptions& opts_;
  std::vector<SensingAction> actions_;
  std::map<int, std::map<std::vector<double>, double>> memo_;
};

class PolicyEvaluator {
 public:
  PolicyEvaluator(const ExperimentConfig& cfg, const EvalOptions& opts)
      : cfg_(cfg), opts_(opts), per_slot_(static_cast<std::size_t>(cfg.horizon), 0.0) {}

  double run(const BeliefVector& belief, int slot, double reach, PolicyCursor cursor) {
    const int remaining = cfg_.horizon - slot;
    const SensingAction action = cursor.resolve(cfg_, belief, remaining, opts_);
    const double reward = immediate_reward(belief, action, cfg_.utility);
    per_slot_[static_cast<std::size_t>(slot)] += reach * reward;
    if (remaining == 1) return reward;

    double continuation = 0.0;
    const OutcomeMask outcomes = OutcomeMask{1} << cfg_.sense;
    for (OutcomeMask m = 0; m < outcomes; ++m) {
      const double p = outcome_probability(belief, action, m);
      if (p == 0.0) continue;
      const BeliefVector next = update_belief(belief, action, m, cfg_.model);
      continuation += p * run(next, slot + 1, reach * p, cursor.advance(m));
    }
    return reward + continuation;
  }

  std::vector<double> take_per_slot() { return std::move(per_slot_); }

 private:
  const ExperimentConfig& cfg_;
  const EvalOptions& opts_;
  std::vector<double> per_slot_;
};

ActionTree expand(const ExperimentConfig& cfg, const BeliefVector& belief, int remaining,
                  PolicyCursor cursor, const EvalOptions& opts) {
  SensingAction action = cursor.resolve(cfg, belief, remaining, opts);
  ActionNode node{action, {}};
  if (remaining > 1) {
    const OutcomeMask outcomes = OutcomeMask{1} << cfg.sense;
    node.children.assign(outcomes, nullptr);
    for (OutcomeMask m = 0; m < outcomes; ++m) {
      if (outcome_probability(belief, action, m) == 0.0) continue;
      node.children[m] = expand(cfg, update_belief(belief, action, m, cfg.model), remaining - 1,
                                cursor.advance(m), opts);
    }
  }
  return std::make_shared<const ActionNode>(std::move(node));
}

}  // namespace

SensingAction PolicyCursor::resolve(const ExperimentConfig& cfg, const BeliefVector& belief,
                                    int remaining, const EvalOptions& opts) {
  if (spec_) {
    const auto& rule = spec_->rule();
    if (std::holds_alternative<PolicySpec::Optimal>(rule)) {
      check_budget(cfg, remaining, opts);
      OptimalSolver solver(cfg, opts);
      node_ = solver.tree(belief, remaining).second;
      spec_ = nullptr;
    } else if (const auto* e = std::get_if<PolicySpec::Explicit>(&rule)) {
      node_ = e->root;
      spec_ = nullptr;
    }
  }

  if (node_) {
    const std::size_t expected = remaining > 1 ? (std::size_t{1} << cfg.sense) : 0;
    if (node_->children.size() != expected) {
      throw ContractError("explicit policy tree depth does not match the remaining horizon");
    }
    if (node_->action.size() != static_cast<std::size_t>(cfg.sense)) {
      throw ContractError("policy tree action does not sense exactly k channels");
    }
    node_->action.validate_for(belief.size());
    return node_->action;
  }

  if (spec_->is_myopic()) return myopic_action(belief, cfg.sense);
  const auto& fixed = std::get<PolicySpec::FixedFirst>(spec_->rule());
  if (fixed.action.size() != static_cast<std::size_t>(cfg.sense)) {
    throw ContractError("fixed action does not sense exactly k channels");
  }
  fixed.action.validate_for(belief.size());
  return fixed.action;
}

PolicyCursor PolicyCursor::advance(OutcomeMask outcome) const {
  PolicyCursor next;
  if (node_) {
    if (outcome >= node_->children.size() || !node_->children[outcome]) {
      throw ContractError("policy tree does not cover a reachable outcome");
    }
    next.node_ = node_->children[outcome];
    return next;
  }
  if (spec_->is_myopic()) return *this;
  next.spec_ = std::get<PolicySpec::FixedFirst>(spec_->rule()).then.get();
  return next;
}

EvaluationReport evaluate_policy(const ExperimentConfig& cfg, const PolicySpec& policy,
                                 const EvalOptions& opts) {
  cfg.validate();
  if (const auto* e = std::get_if<PolicySpec::Explicit>(&policy.rule())) {
    if (tree_depth(e->root) != cfg.horizon) {
      throw ContractError("explicit policy tree depth " + std::to_string(tree_depth(e->root)) +
                          " does not equal horizon " + std::to_string(cfg.horizon));
    }
  }
  PolicyEvaluator evaluator(cfg, opts);
  EvaluationReport report;
  report.total_expected_reward = evaluator.run(cfg.initial_belief, 0, 1.0, PolicyCursor(policy));
  report.average_reward = report.total_expected_reward / cfg.horizon;
  report.per_slot = evaluator.take_per_slot();
  return report;
}

EvaluationReport optimal_value(const ExperimentConfig& cfg, const EvalOptions& opts) {
  cfg.validate();
  check_budget(cfg, cfg.horizon, opts);
  OptimalSolver solver(cfg, opts);
  auto [value, tree] = solver.tree(cfg.initial_belief, cfg.horizon);

  PolicyEvaluator evaluator(cfg, opts);
  const PolicySpec as_policy = PolicySpec::explicit_tree(tree);
  evaluator.run(cfg.initial_belief, 0, 1.0, PolicyCursor(as_policy));

  EvaluationReport report;
  report.total_expected_reward = value;
  report.average_reward = value / cfg.horizon;
  report.per_slot = evaluator.take_per_slot();
  report.action_tree = std::move(tree);
  return report;
}

double optimal_total(const ExperimentConfig& cfg, const EvalOptions& opts) {
  cfg.validate();
  check_budget(cfg, cfg.horizon, opts);
  OptimalSolver solver(cfg, opts);
  return solver.value(cfg.initial_belief, cfg.horizon);
}

double myopic_gap(const ExperimentConfig& cfg, const EvalOptions& opts) {
  const double best = optimal_total(cfg, opts);
  const double greedy = evaluate_policy(cfg, PolicySpec::myopic(), opts).total_expected_reward;
  const double gap = best - greedy;
  if (gap < 0.0) {
    if (gap >= -1e-12) return 0.0;
    throw std::logic_error("optimal value below myopic value by " + std::to_string(-gap));
  }
  return gap;
}

PolicySpec build_remark_policy(const ExperimentConfig& cfg, const SensingAction& first_action,
                               const EvalOptions& opts) {
  cfg.validate();
  if (cfg.horizon < 3) throw ContractError("remark policy needs a horizon of at least 3 slots");
  if (first_action.size() != static_cast<std::size_t>(cfg.sense)) {
    throw ContractError("first action does not sense exactly k channels");
  }
  first_action.validate_for(cfg.initial_belief.size());
  check_budget(cfg, cfg.horizon - 2, opts);

  const OutcomeMask outcomes = OutcomeMask{1} << cfg.sense;
  OptimalSolver solver(cfg, opts);
  ActionNode root{first_action, std::vector<ActionTree>(outcomes)};
  for (OutcomeMask m0 = 0; m0 < outcomes; ++m0) {
    if (outcome_probability(cfg.initial_belief, first_action, m0) == 0.0) continue;
    const BeliefVector b1 = update_belief(cfg.initial_belief, first_action, m0, cfg.model);
    ActionNode second{myopic_action(b1, cfg.sense), std::vector<ActionTree>(outcomes)};
    for (OutcomeMask m1 = 0; m1 < outcomes; ++m1) {
      if (outcome_probability(b1, second.action, m1) == 0.0) continue;
      const BeliefVector b2 = update_belief(b1, second.action, m1, cfg.model);
      second.children[m1] = solver.tree(b2, cfg.horizon - 2).second;
    }
    root.children[m0] = std::make_shared<const ActionNode>(std::move(second));
  }
  return PolicySpec::explicit_tree(std::make_shared<const ActionNode>(std::move(root)));
}

ActionTree materialize(const ExperimentConfig& cfg, const PolicySpec& policy,
                       const EvalOptions& opts) {
  cfg.validate();
  return expand(cfg, cfg.initial_belief, cfg.horizon, PolicyCursor(policy), opts);
}

}  // namespace osa
