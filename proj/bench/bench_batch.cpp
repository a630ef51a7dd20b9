// Serial reference against the OpenMP batch runner on the same seeds.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "cablesim/batch.hpp"

using namespace cablesim;

namespace {

std::vector<std::uint64_t> seeds(std::int64_t n) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 1);
  return s;
}

void BM_Serial(benchmark::State& state) {
  const auto cfg = default_scenario();
  const auto s = seeds(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch_serial(cfg, ControllerKind::kProposed, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const auto cfg = default_scenario();
  const auto s = seeds(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(cfg, ControllerKind::kProposed, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = batch_threads();
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
