// Acceptance suite: one self-contained check per release criterion, one
// PASS/FAIL line each, non-zero exit if anything fails. Registered with
// ctest next to the unit suites but also meant to be run by hand.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "autotune/csa.hpp"
#include "autotune/nelder_mead.hpp"
#include "autotune/rbgs.hpp"
#include "autotune/session.hpp"
#include "fake_clock.hpp"
#include "nm_reference.hpp"

using namespace autotune;
using test_support::FakeClock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using CriterionFn = std::function<Outcome()>;

struct Criterion {
  int id;
  std::string name;
  double time_limit_seconds;  // 0 = no stated limit
  CriterionFn body;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double sphere2(const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }

// --- criterion 1: CSA session accounting --------------------------------

Outcome check_eq1_exactness() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> max_iter_dist(1, 20);
  std::uniform_int_distribution<int> ignore_dist(0, 3);
  std::uniform_int_distribution<int> num_opt_dist(1, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const int max_iter = max_iter_dist(rng);
    const int ignore = ignore_dist(rng);
    const int num_opt = num_opt_dist(rng);
    FakeClock clock;
    SessionOptions options;
    options.clock = clock.fn();
    TuningSession session(1, 9, ignore, 1, num_opt, max_iter, trial, options);
    long executions = 0;
    std::vector<int> point(1);
    session.entire_exec_runtime(
        [&](std::span<const int>) {
          ++executions;
          clock.advance(1.0);
        },
        std::span<int>(point));
    const long expected = static_cast<long>(max_iter) * (ignore + 1) * num_opt;
    if (executions != expected || session.target_execs() != expected) {
      return {false, fmt("config (max_iter=%d ignore=%d num_opt=%d): %ld executions, "
                         "expected %ld",
                         max_iter, ignore, num_opt, executions, expected)};
    }
  }
  return {true, "20 random configurations, zero deviation"};
}

// --- criterion 2: NM session accounting ---------------------------------

Outcome check_eq2_bound() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> max_iter_dist(5, 50);
  std::uniform_int_distribution<int> ignore_dist(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int max_iter = max_iter_dist(rng);
    const int ignore = ignore_dist(rng);
    // First half: the error criterion must never fire, so the stub drifts
    // and no two measurements ever coincide; the count is then exact.
    const bool want_equality = trial < 10;
    const double error_tol = want_equality ? 1e-300 : 1e-2;
    FakeClock clock;
    SessionOptions options;
    options.kind = PointKind::reals;
    options.clock = clock.fn();
    TuningSession session(0, 10, ignore,
                          std::make_unique<NelderMead>(1, error_tol, max_iter, trial),
                          options);
    long executions = 0;
    std::vector<double> point(1);
    session.entire_exec_runtime(
        [&](std::span<const double> p) {
          ++executions;
          clock.advance(want_equality ? 1.0 + 0.001 * static_cast<double>(executions)
                                      : 1.0 + (p[0] - 5.0) * (p[0] - 5.0));
        },
        std::span<double>(point));
    const long bound = static_cast<long>(max_iter) * (ignore + 1);
    if (executions > bound) {
      return {false, fmt("config (max_iter=%d ignore=%d): %ld executions exceed bound %ld",
                         max_iter, ignore, executions, bound)};
    }
    if (want_equality && executions != bound) {
      return {false, fmt("config (max_iter=%d ignore=%d tol=1e-300): %ld executions, "
                         "expected exactly %ld",
                         max_iter, ignore, executions, bound)};
    }
  }
  return {true, "20 configurations within the bound, equality when the error stop is off"};
}

// --- criterion 3: coupled acceptance normalization -----------------------

Outcome check_acceptance_normalization() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> size_dist(2, 16);
  std::uniform_real_distribution<double> cost_dist(-100.0, 100.0);
  std::uniform_real_distribution<double> temp_dist(1e-4, 25.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> costs(size_dist(rng));
    for (double& c : costs) c = cost_dist(rng);
    const auto probs = coupled_acceptance_probabilities(costs, temp_dist(rng));
    double sum = 0.0;
    for (double p : probs) {
      if (!(p > 0.0 && p <= 1.0)) {
        return {false, fmt("trial %d: probability %.17g outside (0,1]", trial, p)};
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      return {false, fmt("trial %d: sum %.17g deviates from 1", trial, sum)};
    }
  }
  return {true, "1000 random cost vectors and temperatures"};
}

// --- criterion 4: optimizer convergence ----------------------------------

Outcome check_convergence() {
  int csa_hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Csa csa(2, 4, 200, seed);
    const CandidatePoint* p = &csa.run(0.0);
    while (!csa.is_end()) p = &csa.run(sphere2(p->coords));
    if (csa.best_cost() <= 1e-2) ++csa_hits;
  }
  if (csa_hits < 18) {
    return {false, fmt("CSA sphere: only %d/20 seeds reached 1e-2", csa_hits)};
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NelderMead nm(2, 1e-8, 0, seed);
    const CandidatePoint* p = &nm.run(0.0);
    while (!nm.is_end()) p = &nm.run(sphere2(p->coords));
    if (nm.best_cost() > 1e-6) {
      return {false, fmt("NM sphere seed %llu: best cost %.3g > 1e-6",
                         (unsigned long long)seed, nm.best_cost())};
    }
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    NelderMead nm(1, 1e-9, 0, seed);
    const CandidatePoint* p = &nm.run(0.0);
    while (!nm.is_end()) {
      p = &nm.run((p->coords[0] - 0.3) * (p->coords[0] - 0.3));
    }
    const double err = std::abs(nm.best_point().coords[0] - 0.3);
    if (err > 1e-3) {
      return {false, fmt("NM 1-D seed %llu: |x-0.3| = %.3g > 1e-3",
                         (unsigned long long)seed, err)};
    }
  }
  return {true, fmt("CSA %d/20 on the sphere; NM 20/20 on both targets", csa_hits)};
}

// --- criterion 5: staged NM equals the batch oracle -----------------------

Outcome check_nm_oracle_equivalence() {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto reference = nm_reference::run(2, 1e-7, 200, seed, sphere2);
    NelderMead nm(2, 1e-7, 200, seed);
    std::vector<std::vector<double>> trace;
    const CandidatePoint* p = &nm.run(0.0);
    while (!nm.is_end()) {
      trace.push_back(p->coords);
      p = &nm.run(sphere2(p->coords));
    }
    if (trace.size() != reference.trace.size()) {
      return {false, fmt("seed %llu: trace length %zu vs reference %zu",
                         (unsigned long long)seed, trace.size(), reference.trace.size())};
    }
    for (std::size_t k = 0; k < trace.size(); ++k) {
      for (std::size_t d = 0; d < trace[k].size(); ++d) {
        const double delta = std::abs(trace[k][d] - reference.trace[k][d]);
        if (delta > 1e-12 * std::max(1.0, std::abs(reference.trace[k][d]))) {
          return {false, fmt("seed %llu: proposal %zu differs by %.3g",
                             (unsigned long long)seed, k, delta)};
        }
      }
    }
  }
  return {true, "50 seeds, proposal traces identical within 1e-12"};
}

// --- criterion 6: single/entire mode equivalence --------------------------

Outcome check_mode_equivalence() {
  const auto runtime_of = [](int chunk) {
    return 0.25 + 0.01 * ((chunk * 7) % 5) + 0.003 * chunk;
  };
  struct Config {
    int ignore, num_opt, max_iter;
  };
  const std::vector<Config> configs = {
      {0, 1, 5}, {0, 3, 5}, {0, 4, 12}, {1, 1, 5},  {1, 3, 12},
      {1, 2, 8}, {2, 3, 5}, {2, 1, 12}, {3, 2, 10}, {0, 8, 20},
  };
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto [ignore, num_opt, max_iter] = configs[k];
    const std::uint64_t seed = 100 + k;
    const long num_eval = static_cast<long>(max_iter) * (ignore + 1) * num_opt;

    FakeClock clock_entire;
    SessionOptions entire_options;
    entire_options.clock = clock_entire.fn();
    TuningSession entire(1, 32, ignore, 1, num_opt, max_iter, seed, entire_options);
    std::vector<int> entire_point(1);
    entire.entire_exec_runtime(
        [&](std::span<const int> p) { clock_entire.advance(runtime_of(p[0])); },
        std::span<int>(entire_point));

    FakeClock clock_single;
    SessionOptions single_options;
    single_options.clock = clock_single.fn();
    TuningSession single(1, 32, ignore, 1, num_opt, max_iter, seed, single_options);
    std::vector<int> single_point(1);
    for (long call = 0; call < num_eval; ++call) {
      single.single_exec_runtime(
          [&](std::span<const int> p) { clock_single.advance(runtime_of(p[0])); },
          std::span<int>(single_point));
    }
    if (!single.finished() || single_point != entire_point ||
        single.best_cost() != entire.best_cost()) {
      return {false, fmt("config %zu (ignore=%d num_opt=%d max_iter=%d): modes diverge",
                         k, ignore, num_opt, max_iter)};
    }
  }
  return {true, fmt("%zu configurations, final solutions bit-identical", configs.size())};
}

// --- criterion 7: red-black Gauss-Seidel soundness ------------------------

double reference_sweep(rbgs::Grid& grid) {
  const int n = grid.n();
  double diff = 0.0;
  for (int color : {1, 0}) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if ((i + j) % 2 != color) continue;
        const double old = grid.at(i, j);
        const double fresh = 0.25 * (grid.at(i - 1, j) + grid.at(i + 1, j) +
                                     grid.at(i, j - 1) + grid.at(i, j + 1));
        grid.at(i, j) = fresh;
        diff += std::abs(fresh - old);
      }
    }
  }
  return diff;
}

rbgs::Grid patterned_grid(int n) {
  rbgs::Grid grid(n, 0.0, 1.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      grid.at(i, j) = ((i * 13 + j * 7) % 11) / 11.0;
    }
  }
  return grid;
}

Outcome check_rbgs_soundness() {
  for (const int n : {16, 64}) {
    rbgs::Grid reference = patterned_grid(n);
    for (int s = 0; s < 10; ++s) reference_sweep(reference);
    for (const int threads : {1, 2, 4}) {
      for (const int chunk : {1, 3, n}) {
        rbgs::Grid grid = patterned_grid(n);
        ThreadTeam team(threads);
        for (int s = 0; s < 10; ++s) {
          rbgs::sweep(grid, team, rbgs::ChunkConfig::uniform(chunk));
        }
        if (grid.values() != reference.values()) {
          return {false, fmt("n=%d threads=%d chunk=%d: grid deviates from the serial "
                             "reference",
                             n, threads, chunk)};
        }
      }
    }
  }
  rbgs::Grid grid(64, 0.0, 1.0);
  ThreadTeam team(4);
  rbgs::solve(grid, team, rbgs::ChunkConfig::uniform(4), 1e-10, 20000);
  for (int i = 1; i <= grid.n(); ++i) {
    for (int j = 1; j <= grid.n(); ++j) {
      if (std::abs(grid.at(i, j) - 1.0) > 1e-6) {
        return {false, fmt("cell (%d,%d) = %.8f after convergence", i, j, grid.at(i, j))};
      }
    }
  }
  return {true, "18 (n,threads,chunk) combinations bit-identical; boundary problem "
                "converged to the constant"};
}

// --- criterion 8: end-to-end tuning sanity --------------------------------

Outcome check_end_to_end_argmin() {
  const auto runtime_of = [](int chunk) { return 1.0 + 0.125 * std::abs(chunk - 5); };
  int brute_best = 1;
  int ties = 0;
  for (int c = 1; c <= 9; ++c) {
    if (runtime_of(c) < runtime_of(brute_best)) brute_best = c;
  }
  for (int c = 1; c <= 9; ++c) {
    if (c != brute_best && runtime_of(c) == runtime_of(brute_best)) ++ties;
  }
  if (brute_best != 5 || ties != 0) {
    return {false, "brute-force oracle does not confirm a unique argmin at 5"};
  }

  FakeClock clock_entire;
  SessionOptions entire_options;
  entire_options.clock = clock_entire.fn();
  TuningSession entire(1, 9, 1, 1, 4, 25, 42, entire_options);
  std::vector<int> point(1);
  entire.entire_exec_runtime(
      [&](std::span<const int> p) { clock_entire.advance(runtime_of(p[0])); },
      std::span<int>(point));
  if (point[0] != 5) {
    return {false, fmt("entire mode returned %d, expected 5", point[0])};
  }

  FakeClock clock_single;
  SessionOptions single_options;
  single_options.clock = clock_single.fn();
  TuningSession single(1, 9, 1, 1, 4, 25, 42, single_options);
  std::vector<int> single_point(1);
  while (!single.finished()) {
    single.single_exec_runtime(
        [&](std::span<const int> p) { clock_single.advance(runtime_of(p[0])); },
        std::span<int>(single_point));
  }
  if (single_point[0] != 5) {
    return {false, fmt("single mode returned %d, expected 5", single_point[0])};
  }
  return {true, "both modes returned the unique argmin 5"};
}

// --- criterion 9: CLI trace determinism -----------------------------------

#ifndef AUTOTUNE_CLI_PATH
#define AUTOTUNE_CLI_PATH ""
#endif

Outcome check_cli_determinism() {
  const std::string cli = AUTOTUNE_CLI_PATH;
  if (cli.empty() || !std::filesystem::exists(cli)) {
    return {false, "CLI binary not found (build with tools enabled)"};
  }
  const auto dir = std::filesystem::temp_directory_path();
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::vector<std::string> invocations = {
      "bench --optimizer csa --function sphere --max-iter 60",
      "bench --optimizer nm --function rastrigin --dim 2 --max-iter 80 --output json",
      "rbgs --tuned-mode fixed --fixed-chunk 4 --n 32 --threads 2 --max-sweeps 50",
  };
  for (std::size_t k = 0; k < invocations.size(); ++k) {
    std::string traces[2];
    for (int run = 0; run < 2; ++run) {
      const auto trace_path =
          dir / fmt("autotune_acc9_%zu_%d_%d.trace", k, run, (int)::getpid());
      const std::string cmd = cli + " " + invocations[k] + " --output-path " +
                              trace_path.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (status != 0) {
        return {false, fmt("invocation %zu exited with status %d", k, status)};
      }
      traces[run] = slurp(trace_path);
      std::filesystem::remove(trace_path);
    }
    if (traces[0].empty() || traces[0] != traces[1]) {
      return {false, fmt("invocation %zu: traces differ between identical runs", k)};
    }
  }
  return {true, fmt("%zu invocations, byte-identical traces on repeat runs",
                    invocations.size())};
}

// --- criterion 10: reset semantics ----------------------------------------

Outcome check_reset_semantics() {
  Csa csa(2, 3, 7, 5);
  const CandidatePoint* p = &csa.run(0.0);
  while (!csa.is_end()) p = &csa.run(sphere2(p->coords));
  const double best_before = csa.best_cost();
  if (!std::isfinite(best_before)) {
    return {false, "optimizer finished without a finite best cost"};
  }

  csa.reset(0);
  if (csa.is_end() || csa.best_cost() != best_before) {
    return {false, "reset(0) lost the best record or stayed finished"};
  }
  long costed = 0;
  p = &csa.run(0.0);
  while (!csa.is_end()) {
    p = &csa.run(sphere2(p->coords));
    ++costed;
  }
  if (costed != 3 * 7) {
    return {false, fmt("reset(0) granted %ld costed calls, expected %d", costed, 21)};
  }

  csa.reset(2);
  if (!std::isinf(csa.best_cost()) ||
      csa.describe().find("best_cost=inf") == std::string::npos) {
    return {false, "reset(2) did not clear the best record"};
  }
  return {true, "reset(0) kept the best and re-armed the budget; reset(2) cleared it"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "target-execution count is exactly max_iter*(ignore+1)*num_opt (CSA)", 1.0,
       check_eq1_exactness},
      {2, "target-execution count is bounded by max_iter*(ignore+1) (NM)", 1.0,
       check_eq2_bound},
      {3, "coupled acceptance probabilities normalize to 1 in (0,1]", 0.0,
       check_acceptance_normalization},
      {4, "optimizers converge on analytic minima", 10.0, check_convergence},
      {5, "staged Nelder-Mead equals the batch reference", 5.0,
       check_nm_oracle_equivalence},
      {6, "single mode equals entire mode under an injected clock", 0.0,
       check_mode_equivalence},
      {7, "parallel red-black Gauss-Seidel matches the serial reference", 10.0,
       check_rbgs_soundness},
      {8, "both tuning modes find the unique runtime argmin", 1.0,
       check_end_to_end_argmin},
      {9, "CLI trace output is byte-identical across repeat runs", 0.0,
       check_cli_determinism},
      {10, "reset(0) keeps the best and re-arms; reset(2) clears it", 0.0,
       check_reset_semantics},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (outcome.pass && criterion.time_limit_seconds > 0.0 &&
        elapsed > criterion.time_limit_seconds) {
      outcome = {false, fmt("exceeded the %.0fs budget (%.2fs)",
                            criterion.time_limit_seconds, elapsed)};
    }
    if (!outcome.pass) ++failures;
    std::printf("criterion %2d [%s] %s — %s (%.2fs)\n", criterion.id,
                outcome.pass ? "PASS" : "FAIL", criterion.name.c_str(),
                outcome.detail.c_str(), elapsed);
  }
  if (failures) {
    std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
