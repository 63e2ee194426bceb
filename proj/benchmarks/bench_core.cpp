#include <benchmark/benchmark.h>

#include "auditcov/evaluation_coverage.hpp"
#include "auditcov/hypothesis_tests.hpp"
#include "auditcov/montecarlo_oracle.hpp"
#include "auditcov/survey_estimation.hpp"

using namespace auditcov;

namespace {

void BM_CoverageKernel(benchmark::State& state) {
  const auto scheme = EvalScheme::create(0.95, 0.058);
  double b = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(biased_noisy_coverage(b, 0.029 * 0.029, scheme));
    b += 1e-6;
  }
}
BENCHMARK(BM_CoverageKernel);

void BM_BreakEven(benchmark::State& state) {
  const auto scheme = EvalScheme::create(0.95, 0.058);
  for (auto _ : state) {
    benchmark::DoNotOptimize(break_even_variance_for_coverage(0.9495, scheme));
  }
}
BENCHMARK(BM_BreakEven);

void BM_EstimateWeights(benchmark::State& state) {
  const auto design = standard_design();
  const auto records = simulate_households(design.true_weights,
                                           static_cast<std::size_t>(state.range(0)), 0.6, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_weights(records));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateWeights)->Arg(1000)->Arg(10000);

void BM_ZAndBTests(benchmark::State& state) {
  const auto design = standard_design();
  const auto records = simulate_households(design.true_weights, 2000, 0.6, 11);
  const auto est = estimate_weights(records);
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_test(design.prices, est, design.true_weights));
    benchmark::DoNotOptimize(b_test(design.prices, est, design.true_weights));
  }
}
BENCHMARK(BM_ZAndBTests);

void BM_EmpiricalCoverage(benchmark::State& state) {
  SimulationPlan plan;
  plan.replicates = static_cast<std::size_t>(state.range(0));
  plan.seed = 1;
  plan.scenario = Scenario::coverage_biased_noisy;
  plan.parameters = CoverageParams{0.95, 0.058, 100.0, 0.02, 0.01};
  plan.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_coverage(plan));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmpiricalCoverage)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
