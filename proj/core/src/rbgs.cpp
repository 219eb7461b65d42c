#include "autotune/rbgs.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>

#include "autotune/errors.hpp"

namespace autotune::rbgs {

namespace {

// Interior row i of the given color: update cells and return the row's
// contribution to the L1 update norm. Black = (i+j) odd, red = (i+j) even.
double update_row(Grid& grid, int i, int color) {
  const int n = grid.n();
  double row_diff = 0.0;
  const int j0 = ((i + 1) % 2 == color) ? 1 : 2;  // first j with (i+j)%2 == color
  for (int j = j0; j <= n; j += 2) {
    const double old = grid.at(i, j);
    const double fresh =
        0.25 * (grid.at(i - 1, j) + grid.at(i + 1, j) + grid.at(i, j - 1) + grid.at(i, j + 1));
    grid.at(i, j) = fresh;
    row_diff += std::abs(fresh - old);
  }
  return row_diff;
}

// One color phase: rows are claimed in batches of `chunk` through a shared
// atomic cursor; per-row diffs land in row_diff so the caller can combine
// them in row order.
void run_phase(Grid& grid, ThreadTeam& team, int color, int chunk,
               std::vector<double>& row_diff) {
  const int n = grid.n();
  std::atomic<int> next_row{1};
  team.run([&](int) {
    while (true) {
      const int begin = next_row.fetch_add(chunk, std::memory_order_relaxed);
      if (begin > n) break;
      const int end = std::min(begin + chunk - 1, n);
      for (int i = begin; i <= end; ++i) {
        row_diff[i] = update_row(grid, i, color);
      }
    }
  });
}

}  // namespace

Grid::Grid(int n, double interior, double boundary) : n_(n) {
  if (n < 1) {
    throw config_error("grid requires n >= 1");
  }
  values_.assign(static_cast<std::size_t>(n + 2) * (n + 2), interior);
  for (int k = 0; k <= n + 1; ++k) {
    at(0, k) = boundary;
    at(n + 1, k) = boundary;
    at(k, 0) = boundary;
    at(k, n + 1) = boundary;
  }
}

double sweep(Grid& grid, ThreadTeam& team, ChunkConfig chunks, SweepStats* stats) {
  const int n = grid.n();
  ChunkConfig clamped{std::clamp(chunks.black, 1, n), std::clamp(chunks.red, 1, n)};
  if (stats && (clamped.black != chunks.black || clamped.red != chunks.red)) {
    ++stats->clamped_chunks;
  }

  std::vector<double> row_diff(n + 1, 0.0);
  double diff = 0.0;
  run_phase(grid, team, /*color=*/1, clamped.black, row_diff);
  for (int i = 1; i <= n; ++i) diff += row_diff[i];
  run_phase(grid, team, /*color=*/0, clamped.red, row_diff);
  for (int i = 1; i <= n; ++i) diff += row_diff[i];
  return diff;
}

SolveResult solve(Grid& grid, ThreadTeam& team, ChunkConfig chunks, double tol,
                  int max_sweeps) {
  if (!(tol > 0.0)) {
    throw config_error("solve requires tol > 0");
  }
  if (max_sweeps < 1) {
    throw config_error("solve requires max_sweeps >= 1");
  }
  const double cells = static_cast<double>(grid.n()) * grid.n();
  SolveResult result;
  while (result.sweeps < max_sweeps) {
    result.final_diff = sweep(grid, team, chunks);
    ++result.sweeps;
    if (result.final_diff / cells < tol) break;
  }
  return result;
}

namespace {

ChunkConfig chunks_from(std::span<const int> point) {
  return point.size() == 2 ? ChunkConfig{point[0], point[1]}
                           : ChunkConfig::uniform(point[0]);
}

void check_session(const TuningSession& session) {
  if (session.kind() != PointKind::integers) {
    throw config_error("chunk tuning requires an integer-rendering session");
  }
  if (session.dimension() != 1 && session.dimension() != 2) {
    throw config_error("chunk tuning supports dimension 1 or 2");
  }
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

TunedSolveResult solve_tuned_entire(Grid& grid, ThreadTeam& team, TuningSession& session,
                                    double tol, int max_sweeps) {
  check_session(session);
  TunedSolveResult result;
  std::vector<int> chunk(session.dimension(), 1);
  session.entire_exec_runtime(
      [&](std::span<const int> point) { sweep(grid, team, chunks_from(point)); },
      std::span<int>(chunk));
  result.chunks = chunk;
  result.tuning_execs = session.target_execs();

  const double t0 = now_seconds();
  result.solve = solve(grid, team, chunks_from(chunk), tol, max_sweeps);
  result.main_loop_seconds = now_seconds() - t0;
  return result;
}

TunedSolveResult solve_tuned_single(Grid& grid, ThreadTeam& team, TuningSession& session,
                                    double tol, int max_sweeps) {
  check_session(session);
  if (!(tol > 0.0)) {
    throw config_error("solve requires tol > 0");
  }
  if (max_sweeps < 1) {
    throw config_error("solve requires max_sweeps >= 1");
  }
  TunedSolveResult result;
  std::vector<int> chunk(session.dimension(), 1);
  const double cells = static_cast<double>(grid.n()) * grid.n();

  const double t0 = now_seconds();
  int sweeps = 0;
  double diff = 0.0;
  while (sweeps < max_sweeps) {
    diff = session.single_exec_runtime(
        [&](std::span<const int> point) { return sweep(grid, team, chunks_from(point)); },
        std::span<int>(chunk));
    ++sweeps;
    if (diff / cells < tol) break;
  }
  result.main_loop_seconds = now_seconds() - t0;
  result.solve = SolveResult{sweeps, diff};
  result.chunks = chunk;
  result.tuning_execs = session.target_execs();
  return result;
}

}  // namespace autotune::rbgs
