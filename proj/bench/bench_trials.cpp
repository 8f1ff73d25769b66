#include <benchmark/benchmark.h>

#include "mixrate/harness.hpp"

using namespace mixrate;

namespace {

ExperimentConfig bench_config(std::size_t dim) {
  ExperimentConfig cfg;
  cfg.dim = dim;
  cfg.n_states = 2;
  cfg.n_states_max = 5;
  cfg.n_trials = 64;
  cfg.seed = 1;
  return cfg;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.n_trials));
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(cfg, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.n_trials));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrialsParallel)
    ->ArgsProduct({{2, 4, 8}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
