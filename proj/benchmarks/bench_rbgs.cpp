// Sweep cost across chunk sizes and team widths: the surface the tuner
// searches when it picks a chunk.

#include <benchmark/benchmark.h>

#include "autotune/rbgs.hpp"

using namespace autotune;
using namespace autotune::rbgs;

static void BM_Sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const int chunk = static_cast<int>(state.range(2));
  Grid grid(n, 0.0, 1.0);
  ThreadTeam team(threads);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(grid, team, ChunkConfig::uniform(chunk)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n);
}
BENCHMARK(BM_Sweep)
    ->ArgsProduct({{256, 512}, {1, 2, 4}, {1, 4, 16, 64}})
    ->Unit(benchmark::kMicrosecond);

static void BM_SweepDualChunk(benchmark::State& state) {
  const int n = 256;
  Grid grid(n, 0.0, 1.0);
  ThreadTeam team(static_cast<int>(state.range(0)));
  const ChunkConfig chunks{static_cast<int>(state.range(1)),
                           static_cast<int>(state.range(2))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(grid, team, chunks));
  }
}
BENCHMARK(BM_SweepDualChunk)
    ->Args({4, 2, 16})
    ->Args({4, 16, 2})
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
