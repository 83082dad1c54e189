#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/report.hpp"

using namespace osa::cli;

int main(int argc, char** argv) {
  CLI::App app{"Exact evaluation and stress tests of myopic multi-channel sensing", "osa"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  std::string config_path;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 100'000'000;
  std::string variant = "corrected";
  std::string output = "json";
  std::string out_path;

  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--budget", budget, "Node budget for exhaustive optimisation");
  app.add_option("--variant", variant, "Closed-form variant")
      ->check(CLI::IsMember({"as-printed", "corrected"}));
  app.add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "Write the report here instead of stdout");

  auto* eval = app.add_subcommand("eval", "Exact expected reward of a policy");
  std::optional<std::string> policy;
  eval->add_option("--policy", policy, "myopic | optimal | action list such as [0,1,3]");

  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a published counterexample");
  int ce_id = 1;
  reproduce->add_option("id", ce_id, "Counterexample id (1 or 2)")->required();

  auto* verify = app.add_subcommand("verify", "Grid sweep of an optimality claim");
  VerifyOptions verify_opts;
  double grid_step = 0.0;
  double p_step = 0.0;
  verify->add_option("theorem", verify_opts.theorem, "thm1 | thm2 | thm2-n5 | k1-cited")->required();
  auto* grid_opt = verify->add_option("--grid-step", grid_step, "Belief grid step");
  auto* p_opt = verify->add_option("--p-step", p_step, "Transition probability grid step");

  auto* search = app.add_subcommand("search", "Seeded random counterexample search");
  SearchOptions search_opts;
  std::string n_range = "6", k_range = "3", t_range = "2", constraint = "p11-ge-p01",
              utility = "at-least-one";
  search->add_option("--channels", n_range, "N or N1..N2");
  search->add_option("--sense", k_range, "k or k1..k2");
  search->add_option("--horizon", t_range, "T or T1..T2");
  search->add_option("--constraint", constraint, "p11-ge-p01 | p11-lt-p01 | equal | any");
  search->add_option("--utility", utility, "at-least-one | count-idle")
      ->check(CLI::IsMember({"at-least-one", "count-idle"}));
  search->add_option("--threshold", search_opts.threshold, "Gap threshold");
  search->add_option("--trials", search_opts.trials, "Number of random instances");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a policy's reward");
  std::optional<std::uint64_t> episodes;
  simulate->add_option("--episodes", episodes, "Episode count");

  auto* errata = app.add_subcommand("errata", "Closed-form errata report");
  std::uint64_t instances = 10000;
  errata->add_option("--instances", instances, "Random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  GlobalOptions g;
  g.jobs = jobs;
  g.seed = seed;
  g.budget = budget;
  g.variant = variant == "as-printed" ? osa::FormulaVariant::as_printed
                                      : osa::FormulaVariant::corrected;
  g.output = output == "csv" ? OutputFormat::csv : OutputFormat::json;

  auto need_config = [&]() -> RunConfig {
    if (config_path.empty()) throw ConfigError("--config is required for this command");
    return load_run_config(config_path);
  };

  CommandResult result;
  try {
    if (eval->parsed()) {
      result = cmd_eval(need_config(), policy, g);
    } else if (reproduce->parsed()) {
      result = cmd_reproduce(ce_id, g);
    } else if (verify->parsed()) {
      if (grid_opt->count()) verify_opts.grid_step = grid_step;
      if (p_opt->count()) verify_opts.p_step = p_step;
      result = cmd_verify(verify_opts, g);
    } else if (search->parsed()) {
      search_opts.channels = parse_range(n_range);
      search_opts.sense = parse_range(k_range);
      search_opts.horizon = parse_range(t_range);
      search_opts.constraint = parse_constraint(constraint);
      search_opts.utility =
          utility == "count-idle" ? osa::UtilityKind::count_idle : osa::UtilityKind::at_least_one;
      result = cmd_search(search_opts, g);
    } else if (simulate->parsed()) {
      result = cmd_simulate(need_config(), episodes, g);
    } else if (errata->parsed()) {
      result = cmd_errata(instances, g);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (!result.output.empty()) {
    if (out_path.empty()) {
      std::cout << result.output;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return kInputError;
      }
      out << result.output;
    }
  }
  std::cerr << result.diagnostics;
  return result.exit_code;
}
