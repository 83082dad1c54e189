#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cli/report.hpp"
#include "osa/monte_carlo.hpp"
#include "osa/random.hpp"

namespace osa::cli {

namespace {

constexpr double kAgreeTol = 1e-12;

CommandResult input_error(const std::string& what) {
  return {kInputError, "", "error: " + what + "\n"};
}

CommandResult budget_error(const BudgetError& e) {
  return {kBudgetExceeded, "", std::string("error: ") + e.what() + "\n"};
}

// Runs `body`, mapping library exceptions onto the exit-code contract.
CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const BudgetError& e) {
    return budget_error(e);
  } catch (const ConfigError& e) {
    return input_error(e.what());
  } catch (const ContractError& e) {
    return input_error(e.what());
  } catch (const DomainError& e) {
    return input_error(e.what());
  } catch (const SingularChainError& e) {
    return input_error(e.what());
  }
}

CommandResult json_only(const GlobalOptions& g, const Json& report) {
  if (g.output == OutputFormat::csv) {
    return input_error("CSV output is only available for verify and search");
  }
  return {kOk, dump(report), ""};
}

ExperimentConfig counterexample_config(const Counterexample& ce) {
  return ExperimentConfig{static_cast<int>(ce.beliefs.size()), ce.sense, ce.horizon,
                          UtilityKind::at_least_one, ce.model, ce.beliefs};
}

Json sweep_json(const SweepSpec& spec) {
  Json out;
  out["channels"] = {spec.channels.lo, spec.channels.hi};
  out["sense_k"] = {spec.sense.lo, spec.sense.hi};
  out["horizon_T"] = {spec.horizon.lo, spec.horizon.hi};
  Json levels = Json::array();
  for (double v : spec.belief_levels) levels.push_back(num(v));
  out["belief_levels"] = levels;
  Json p_levels = Json::array();
  for (double v : spec.p_levels) p_levels.push_back(num(v));
  out["p_levels"] = p_levels;
  out["p_constraint"] = to_string(spec.constraint);
  out["utility"] = to_string(spec.utility);
  out["gap_threshold"] = num(spec.gap_threshold);
  out["budget"] = spec.budget;
  return out;
}

}  // namespace

IntRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw ConfigError("bad range '" + text + "'");
      return {v, v};
    }
    const std::string lo = text.substr(0, dots);
    const std::string hi = text.substr(dots + 2);
    const int a = std::stoi(lo, &used);
    if (used != lo.size()) throw ConfigError("bad range '" + text + "'");
    const int b = std::stoi(hi, &used);
    if (used != hi.size() || b < a) throw ConfigError("bad range '" + text + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("bad range '" + text + "'");
  }
}

PConstraint parse_constraint(const std::string& text) {
  if (text == "p11-ge-p01") return PConstraint::p11_ge_p01;
  if (text == "p11-lt-p01") return PConstraint::p11_lt_p01;
  if (text == "equal") return PConstraint::equal;
  if (text == "any") return PConstraint::any;
  throw ConfigError("unknown p constraint '" + text + "'");
}

CommandResult cmd_eval(const RunConfig& input, const std::optional<std::string>& policy_override,
                       const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    RunConfig cfg = input;
    if (policy_override) set_policy(cfg, *policy_override);
    for (const auto& a : cfg.fixed_actions) {
      if (a.size() != static_cast<std::size_t>(cfg.experiment.sense)) {
        throw ConfigError("policy actions must sense exactly sense_k channels");
      }
      a.validate_for(static_cast<std::size_t>(cfg.experiment.channels));
    }
    EvalOptions opts;
    opts.node_budget = g.budget;

    const EvaluationReport r = cfg.policy_kind == "optimal"
                                   ? optimal_value(cfg.experiment, opts)
                                   : evaluate_policy(cfg.experiment, cfg.policy(), opts);

    Json report = report_header("eval");
    report["config"] = format_run_config(cfg);
    report["inputs"] = to_json(cfg.experiment);
    report["policy"] = cfg.policy_kind;
    report["total_expected_reward"] = num(r.total_expected_reward);
    report["average_reward"] = num(r.average_reward);
    Json slots = Json::array();
    for (double v : r.per_slot) slots.push_back(num(v));
    report["per_slot"] = slots;
    if (r.action_tree) report["action_tree"] = to_json(r.action_tree);
    return json_only(g, report);
  });
}

CommandResult cmd_reproduce(int id, const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    const Counterexample& ce = counterexample_by_id(id);
    const ExperimentConfig cfg = counterexample_config(ce);
    EvalOptions opts;
    opts.node_budget = g.budget;

    const double myopic = evaluate_policy(cfg, PolicySpec::myopic(), opts).total_expected_reward;
    const double alternative =
        evaluate_policy(cfg, PolicySpec::fixed_first(ce.alternative, PolicySpec::myopic()), opts)
            .total_expected_reward;
    const double optimal = optimal_total(cfg, opts);
    const double evaluator_gap = alternative - myopic;

    Json report = report_header("reproduce");
    report["counterexample"] = id;
    report["inputs"] = to_json(cfg);
    report["alternative_first_action"] = to_json(ce.alternative);
    report["published_gap"] = num(ce.published_gap);
    report["tolerance"] = num(ce.tolerance);

    Json evaluator;
    evaluator["r_myopic"] = num(myopic);
    evaluator["r_alternative"] = num(alternative);
    evaluator["gap"] = num(evaluator_gap);
    evaluator["optimal_total"] = num(optimal);
    evaluator["optimal_gap"] = num(optimal - myopic);
    report["evaluator"] = evaluator;

    Json closed = Json::object();
    Json matching = Json::array();
    bool selected_agrees = false;
    double selected_gap = 0.0;
    for (FormulaVariant v : {FormulaVariant::as_printed, FormulaVariant::corrected}) {
      const CounterexampleValues values = counterexample_values(id, v);
      const bool matches =
          values.gap() > 0.0 && std::abs(values.gap() - ce.published_gap) <= ce.tolerance;
      const bool agrees = std::abs(values.r_myopic - myopic) <= kAgreeTol &&
                          std::abs(values.r_alternative - alternative) <= kAgreeTol;
      Json entry;
      entry["r_myopic"] = num(values.r_myopic);
      entry["r_alternative"] = num(values.r_alternative);
      entry["gap"] = num(values.gap());
      entry["matches_published_gap"] = matches;
      entry["agrees_with_evaluator"] = agrees;
      closed[to_string(v)] = entry;
      if (matches) matching.push_back(to_string(v));
      if (v == g.variant) {
        selected_agrees = agrees;
        selected_gap = values.gap();
      }
    }
    report["closed_form"] = closed;
    report["matching_variants"] = matching;
    report["selected_variant"] = to_string(g.variant);
    report["closed_form_minus_evaluator_gap"] = num(selected_gap - evaluator_gap);

    const bool pass = evaluator_gap > 0.0 &&
                      std::abs(evaluator_gap - ce.published_gap) <= ce.tolerance &&
                      selected_agrees && std::abs(selected_gap - evaluator_gap) <= kAgreeTol;
    report["verdict"] = pass ? "PASS" : "FAIL";

    CommandResult out = json_only(g, report);
    if (out.exit_code == kOk && !pass) {
      out.exit_code = kReproductionFailed;
      std::ostringstream msg;
      msg.precision(12);
      msg << "reproduction FAILED: evaluator gap " << evaluator_gap << ", closed-form ("
          << to_string(g.variant) << ") gap " << selected_gap << ", published "
          << ce.published_gap << " +/- " << ce.tolerance << "\n";
      out.diagnostics = msg.str();
    }
    return out;
  });
}

CommandResult cmd_verify(const VerifyOptions& v, const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    SweepSpec spec;
    bool exploratory = false;
    double default_step = 0.1;
    if (v.theorem == "thm1") {
      spec.channels = {3, 6};
      spec.constraint = PConstraint::p11_ge_p01;
    } else if (v.theorem == "thm2") {
      spec.channels = {3, 4};
      spec.constraint = PConstraint::p11_lt_p01;
    } else if (v.theorem == "thm2-n5") {
      spec.channels = {5, 5};
      spec.constraint = PConstraint::p11_lt_p01;
      exploratory = true;
    } else if (v.theorem == "k1-cited") {
      spec.channels = {2, 4};
      spec.sense = {1, 1};
      spec.horizon = {2, 4};
      spec.constraint = PConstraint::p11_ge_p01;
      default_step = 0.2;
    } else {
      throw ConfigError("unknown theorem '" + v.theorem + "' (thm1, thm2, thm2-n5, k1-cited)");
    }
    const double step = v.grid_step.value_or(default_step);
    spec.belief_levels = grid_levels(step);
    spec.p_levels = grid_levels(v.p_step.value_or(step));
    spec.budget = g.budget;
    spec.jobs = g.jobs;

    const SweepResult result = sweep_verify(spec);

    int code = kOk;
    if (!result.complete) code = kBudgetExceeded;
    else if (!result.findings.empty() && !exploratory) code = kReproductionFailed;

    if (g.output == OutputFormat::csv) {
      return {code, findings_csv(result.findings),
              result.complete ? "" : "error: " + result.incomplete_reason + "\n"};
    }
    Json report = report_header("verify");
    report["theorem"] = v.theorem;
    report["exploratory"] = exploratory;
    report["sweep"] = sweep_json(spec);
    report["instances"] = result.instances;
    report["complete"] = result.complete;
    if (!result.complete) report["incomplete_reason"] = result.incomplete_reason;
    report["finding_count"] = result.findings.size();
    Json findings = Json::array();
    for (const auto& f : result.findings) findings.push_back(to_json(f));
    report["findings"] = findings;
    report["verified"] = result.complete && result.findings.empty();
    return {code, dump(report), result.complete ? "" : "error: " + result.incomplete_reason + "\n"};
  });
}

CommandResult cmd_search(const SearchOptions& s, const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    SweepSpec spec;
    spec.channels = s.channels;
    spec.sense = s.sense;
    spec.horizon = s.horizon;
    spec.constraint = s.constraint;
    spec.utility = s.utility;
    spec.gap_threshold = s.threshold;
    spec.budget = g.budget;
    spec.jobs = g.jobs;
    const std::uint64_t seed = g.seed.value_or(0);

    const std::optional<Finding> best = random_search(spec, seed, s.trials);
    if (g.output == OutputFormat::csv) {
      return {kOk, findings_csv(best ? std::vector<Finding>{*best} : std::vector<Finding>{}), ""};
    }
    Json report = report_header("search");
    report["sweep"] = sweep_json(spec);
    report["seed"] = seed;
    report["trials"] = s.trials;
    report["best_finding"] = best ? to_json(*best) : Json(nullptr);
    return {kOk, dump(report), ""};
  });
}

CommandResult cmd_simulate(const RunConfig& input, std::optional<std::uint64_t> episodes,
                           const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    RunConfig cfg = input;
    cfg.episodes = episodes ? episodes : cfg.episodes.value_or(100000);
    cfg.seed = g.seed ? g.seed : cfg.seed.value_or(0);
    EvalOptions opts;
    opts.node_budget = g.budget;

    const PolicySpec policy = cfg.policy();
    const SimulationEstimate est =
        estimate(cfg.experiment, policy, *cfg.episodes, *cfg.seed, g.jobs, opts);
    const double exact = cfg.policy_kind == "optimal"
                             ? optimal_total(cfg.experiment, opts)
                             : evaluate_policy(cfg.experiment, policy, opts).total_expected_reward;

    Json report = report_header("simulate");
    report["config"] = format_run_config(cfg);
    report["inputs"] = to_json(cfg.experiment);
    report["policy"] = cfg.policy_kind;
    report["episodes"] = est.episodes;
    report["seed"] = est.seed;
    report["mean"] = num(est.mean);
    report["std_error"] = num(est.std_error);
    report["exact_total"] = num(exact);
    const double diff = est.mean - exact;
    report["z_score"] = est.std_error > 0.0 ? num(diff / est.std_error) : Json(nullptr);
    report["within_4_std_errors"] = std::abs(diff) <= 4.0 * est.std_error;
    return json_only(g, report);
  });
}

CommandResult cmd_errata(std::uint64_t instances, const GlobalOptions& g) {
  return guarded([&]() -> CommandResult {
    const std::uint64_t seed = g.seed.value_or(0);
    Json report = report_header("errata");
    report["instances"] = instances;
    report["seed"] = seed;
    report["bound_region"] = to_json(verify_identity_region(instances, seed));

    // Which reading of the k = 2 myopic closed form matches the evaluator.
    Json myopic_form = Json::object();
    double worst[2] = {0.0, 0.0};
    for (std::uint64_t idx = 0; idx < instances; ++idx) {
      RandomStream rng(seed ^ 0x5eedULL, idx);
      const int n = rng.uniform_int(3, 6);
      std::vector<double> w(static_cast<std::size_t>(n));
      for (auto& x : w) x = rng.uniform();
      std::sort(w.begin(), w.end(), std::greater<>());
      const double a = rng.uniform();
      const double b = rng.uniform();
      const ChannelModel model(std::min(a, b), std::max(a, b));
      const ExperimentConfig cfg{n, 2, 2, UtilityKind::at_least_one, model, BeliefVector(w)};
      const double exact = evaluate_policy(cfg, PolicySpec::myopic()).total_expected_reward;
      const ClosedFormInput in(BeliefVector(w), model);
      worst[0] = std::max(worst[0],
                          std::abs(myopic_two_slot_reward(in, FormulaVariant::as_printed) - exact));
      worst[1] = std::max(worst[1],
                          std::abs(myopic_two_slot_reward(in, FormulaVariant::corrected) - exact));
    }
    for (int i = 0; i < 2; ++i) {
      const auto v = i == 0 ? FormulaVariant::as_printed : FormulaVariant::corrected;
      Json entry;
      entry["max_abs_diff_vs_evaluator"] = num(worst[i]);
      entry["agrees_with_evaluator"] = worst[i] <= kAgreeTol;
      myopic_form[to_string(v)] = entry;
    }
    report["myopic_two_slot_closed_form"] = myopic_form;

    Json ces = Json::array();
    for (int id : {1, 2}) {
      const Counterexample& ce = counterexample_by_id(id);
      const ExperimentConfig cfg = counterexample_config(ce);
      const double myopic = evaluate_policy(cfg, PolicySpec::myopic()).total_expected_reward;
      const double alt =
          evaluate_policy(cfg, PolicySpec::fixed_first(ce.alternative, PolicySpec::myopic()))
              .total_expected_reward;
      Json entry;
      entry["counterexample"] = id;
      entry["published_gap"] = num(ce.published_gap);
      entry["evaluator_gap"] = num(alt - myopic);
      for (FormulaVariant v : {FormulaVariant::as_printed, FormulaVariant::corrected}) {
        const CounterexampleValues values = counterexample_values(id, v);
        Json ve;
        ve["gap"] = num(values.gap());
        ve["agrees_with_evaluator"] = std::abs(values.r_myopic - myopic) <= kAgreeTol &&
                                      std::abs(values.r_alternative - alt) <= kAgreeTol;
        ve["matches_published_gap"] =
            values.gap() > 0.0 && std::abs(values.gap() - ce.published_gap) <= ce.tolerance;
        entry[to_string(v)] = ve;
      }
      ces.push_back(entry);
    }
    report["counterexamples"] = ces;

    const Counterexample& ce1 = positive_counterexample();
    Json identities = Json::array();
    for (const auto& c : gap_identities(ClosedFormInput(ce1.beliefs, ce1.model))) {
      Json entry;
      entry["identity"] = c.name;
      entry["j"] = c.j;
      entry["printed_rhs"] = num(c.printed_rhs);
      entry["direct_difference"] = num(c.direct);
      entry["discrepancy"] = num(c.discrepancy);
      identities.push_back(entry);
    }
    report["identities_at_counterexample_point"] = identities;
    return json_only(g, report);
  });
}

}  // namespace osa::cli
