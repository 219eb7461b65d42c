// Per-call overhead of the staged optimizers and the session plumbing;
// this is the fixed cost auto-tuning adds to each measured section.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "autotune/csa.hpp"
#include "autotune/nelder_mead.hpp"
#include "autotune/session.hpp"

using namespace autotune;

static void BM_CsaRun(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Csa csa(dim, 4, 1 << 30, 7);
  double cost = 1.0;
  for (auto _ : state) {
    const auto& point = csa.run(cost);
    benchmark::DoNotOptimize(point.coords.data());
    cost = point.coords[0];
  }
}
BENCHMARK(BM_CsaRun)->Arg(1)->Arg(4)->Arg(16);

static void BM_NelderMeadRun(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  NelderMead nm(dim, 1e-300, 0, 7);
  double cost = 1.0;
  for (auto _ : state) {
    const auto& point = nm.run(cost);
    benchmark::DoNotOptimize(point.coords.data());
    cost = 1.0 + point.coords[0] * point.coords[0];
  }
}
BENCHMARK(BM_NelderMeadRun)->Arg(1)->Arg(4)->Arg(16);

static void BM_SessionStartEnd(benchmark::State& state) {
  TuningSession session(1, 1024, 0, 1, 4, 1 << 30, 7);
  std::vector<int> point(1);
  for (auto _ : state) {
    session.start(std::span<int>(point));
    benchmark::DoNotOptimize(point[0]);
    session.end();
  }
}
BENCHMARK(BM_SessionStartEnd);

static void BM_SessionExec(benchmark::State& state) {
  SessionOptions options;
  options.kind = PointKind::reals;
  TuningSession session(0, 1, 0, 2, 4, 1 << 30, 7, options);
  std::vector<double> point(2);
  for (auto _ : state) {
    session.exec(std::span<double>(point), point[0]);
    benchmark::DoNotOptimize(point.data());
  }
}
BENCHMARK(BM_SessionExec);

BENCHMARK_MAIN();
