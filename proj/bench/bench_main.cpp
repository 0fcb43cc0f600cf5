// Serial reference vs OpenMP kernels: slot simulation, the hybrid candidate
// sweep and the SBS-dependent search.

#include <benchmark/benchmark.h>

#include "hcache/optimizer.hpp"
#include "hcache/simulator.hpp"

using namespace hcache;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_Simulate(benchmark::State& state) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  const auto pop = zipf_popularity(1000, 1.0, 10);
  const SimulationOptions options{2000, 1, false, mode(state)};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, pop, HybridPlacement{37, 352}, options));
  label(state);
}

void BM_HybridCandidates(benchmark::State& state) {
  SystemConfig cfg{10, 1000, 100, {1, 1, 1, 1, 1, 5, 15, 20, 25, 30}};
  const auto pop = zipf_popularity(1000, 1.0, 10);
  const HybridEvaluator evaluator(cfg, pop);
  const auto candidates = hybrid_candidates(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_candidates(evaluator, candidates, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(candidates.size()));
  label(state);
}

void BM_HeteroSearch(benchmark::State& state) {
  SystemConfig cfg{4, 6, 2, {2, 1, 3, 1}};
  const auto pop = PopularityMatrix::from_columns({{.3, .2, .2, .1, .1, .1},
                                                   {.1, .3, .2, .2, .1, .1},
                                                   {.2, .2, .2, .2, .1, .1},
                                                   {.4, .1, .1, .1, .1, .2}});
  HeteroSearchOptions options;
  options.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_hetero(cfg, pop, options));
  label(state);
}

}  // namespace

BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HybridCandidates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HeteroSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
