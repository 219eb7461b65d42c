#pragma once

#include <vector>

#include "autotune/session.hpp"
#include "autotune/thread_team.hpp"

namespace autotune::rbgs {

/// (n+2) x (n+2) grid for the 2-D Laplace model problem. The solver
/// updates interior cells 1..n; the boundary ring stays fixed.
class Grid {
public:
  explicit Grid(int n, double interior = 0.0, double boundary = 0.0);

  int n() const { return n_; }
  double& at(int i, int j) { return values_[static_cast<std::size_t>(i) * (n_ + 2) + j]; }
  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * (n_ + 2) + j]; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Grid&) const = default;

private:
  int n_;
  std::vector<double> values_;
};

/// Rows per dynamically claimed work unit, separately for the black phase
/// and the red phase. The one-chunk variant uses the same value for both.
struct ChunkConfig {
  int black = 1;
  int red = 1;

  static ChunkConfig uniform(int chunk) { return {chunk, chunk}; }
};

struct SweepStats {
  long clamped_chunks = 0;  // tuner proposals pushed back into [1, n]
};

/// One red-black Gauss-Seidel sweep: updates black cells ((i+j) odd)
/// first, then red cells, each cell becoming the average of its four
/// neighbours. Within a phase, rows are handed to the team in dynamically
/// claimed batches of `chunk` rows; the phases are barrier-separated.
/// Returns the L1 update norm, accumulated per row and combined in row
/// order so the result is bit-identical for every (threads, chunks) pair.
double sweep(Grid& grid, ThreadTeam& team, ChunkConfig chunks, SweepStats* stats = nullptr);

struct SolveResult {
  int sweeps = 0;
  double final_diff = 0.0;
};

/// Repeats sweep until diff / n^2 < tol or max_sweeps is reached.
SolveResult solve(Grid& grid, ThreadTeam& team, ChunkConfig chunks, double tol,
                  int max_sweeps);

struct TunedSolveResult {
  SolveResult solve;
  std::vector<int> chunks;    // chosen chunk size(s): {both} or {black, red}
  long tuning_execs = 0;      // target executions consumed by tuning
  double main_loop_seconds = 0.0;
};

/// Tunes the chunk size(s) against replica sweeps before the main loop
/// (the extra sweeps advance the grid, which is harmless for this
/// stationary-cost target), then solves with the chosen configuration.
/// The session must render integers and have dimension 1 (one chunk for
/// both phases) or 2 (black and red tuned separately).
TunedSolveResult solve_tuned_entire(Grid& grid, ThreadTeam& team, TuningSession& session,
                                    double tol, int max_sweeps);

/// Tunes in-loop: every solver iteration is one tuning step until the
/// optimizer finishes, after which the remaining iterations run with the
/// final chunks at zero tuning overhead. No extra sweeps are executed.
TunedSolveResult solve_tuned_single(Grid& grid, ThreadTeam& team, TuningSession& session,
                                    double tol, int max_sweeps);

}  // namespace autotune::rbgs
