#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "autotune/optimizer.hpp"

namespace autotune {

/// Nelder-Mead downhill simplex as a staged state machine. Suited to
/// smooth, low-dimensional problems; quicker than annealing but happy to
/// settle into a local minimum.
///
/// One candidate is handed out per run() call: first the dim+1 initial
/// vertices, then reflection / expansion / contraction proposals, and
/// during a shrink the re-evaluated vertices one at a time. The machine
/// stops when the sample standard deviation of the vertex costs drops
/// below error_tol, or after max_iter costed calls (0 = no cap).
class NelderMead final : public Optimizer {
public:
  static constexpr double kReflection = 1.0;
  static constexpr double kExpansion = 2.0;
  static constexpr double kContraction = 0.5;
  static constexpr double kShrink = 0.5;

  NelderMead(int dim, double error_tol, int max_iter = 0, std::uint64_t seed = 42);

  const CandidatePoint& run(double cost) override;
  int num_points() const override { return 1; }
  int dimension() const override { return dim_; }
  bool is_end() const override { return stage_ == Stage::Finished; }

  /// Level 0 keeps the simplex and the best-ever record and re-runs the
  /// machine (vertices are re-costed). Level 1 redraws the simplex but
  /// keeps the best. Level 2 and above also clear the best record.
  void reset(int level) override;

  std::string describe() const override;

  long evaluations() const { return evals_; }
  double best_cost() const { return best_cost_; }
  const CandidatePoint& best_point() const { return best_point_; }

private:
  enum class Stage { EvalInitial, AwaitReflect, AwaitExpand, AwaitContract, AwaitShrink, Finished };

  void build_initial_simplex();
  void restart_machine();
  void consume(double cost);
  void advance_iteration();
  void begin_shrink();
  void replace_worst(const CandidatePoint& point, double cost);
  void order_simplex();
  bool budget_exhausted() const;
  static const char* stage_name(Stage s);

  int dim_;
  double error_tol_;
  int max_iter_;
  long evals_ = 0;
  Stage stage_ = Stage::EvalInitial;
  bool awaiting_cost_ = false;

  std::vector<CandidatePoint> vertices_;
  std::vector<double> costs_;
  int eval_index_ = 0;  // next initial vertex awaiting cost

  int best_index_ = 0;
  int worst_index_ = 0;
  double second_worst_cost_ = 0.0;
  CandidatePoint centroid_;

  CandidatePoint pending_;
  CandidatePoint reflect_point_;
  double reflect_cost_ = 0.0;
  bool contract_outside_ = false;

  std::vector<int> shrink_targets_;
  std::size_t shrink_cursor_ = 0;

  CandidatePoint best_point_;
  double best_cost_;
  std::mt19937_64 rng_;
};

}  // namespace autotune
