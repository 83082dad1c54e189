#include <benchmark/benchmark.h>

#include "osa/formulas.hpp"
#include "osa/monte_carlo.hpp"
#include "osa/policy.hpp"

namespace {

osa::ExperimentConfig example(int horizon) {
  const auto& ce = osa::positive_counterexample();
  return {6, 3, horizon, osa::UtilityKind::at_least_one, ce.model, ce.beliefs};
}

void BM_EvaluateMyopic(benchmark::State& state) {
  const auto cfg = example(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(osa::evaluate_policy(cfg, osa::PolicySpec::myopic()));
  }
}
BENCHMARK(BM_EvaluateMyopic)->Arg(2)->Arg(3)->Arg(4);

void BM_OptimalTotal(benchmark::State& state) {
  const auto cfg = example(static_cast<int>(state.range(0)));
  osa::EvalOptions opts;
  opts.memoize = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(osa::optimal_total(cfg, opts));
}
BENCHMARK(BM_OptimalTotal)->Args({2, 0})->Args({2, 1})->Args({3, 1})->Unit(benchmark::kMillisecond);

void BM_ClosedForm(benchmark::State& state) {
  const osa::ClosedFormInput in(example(2).initial_belief, example(2).model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(osa::myopic_two_slot_reward(in, osa::FormulaVariant::corrected));
  }
}
BENCHMARK(BM_ClosedForm);

void BM_Estimate(benchmark::State& state) {
  const auto cfg = example(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(osa::estimate(cfg, osa::PolicySpec::myopic(), 10000, 1));
  }
}
BENCHMARK(BM_Estimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
