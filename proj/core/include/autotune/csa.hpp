#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "autotune/optimizer.hpp"

namespace autotune {

/// Coupled acceptance probabilities of an annealing ensemble.
/// A_i = exp((E_i - E_max) / t_acc) / sum_j exp((E_j - E_max) / t_acc)
/// where E_i are the costs of the current solutions. Higher-cost members
/// get a larger probability, so they move more eagerly than the leaders.
/// The result sums to 1 and every entry lies in (0, 1].
std::vector<double> coupled_acceptance_probabilities(std::span<const double> costs,
                                                     double t_acc);

/// Classic Metropolis acceptance probability min(1, exp(-(c_new - c_old)/t)).
/// Used when the ensemble degenerates to a single annealer.
double metropolis_acceptance(double cost_new, double cost_old, double t_acc);

/// Coupled Simulated Annealing: num_opt annealers share an acceptance
/// coupling term so the ensemble balances refinement against escapes from
/// local minima. The staged machine hands out one probe per run() call;
/// once every probe of an iteration is costed it performs the coupled
/// acceptance step and the temperature updates.
///
/// Consumes exactly max_iter * num_opt candidate costs before is_end().
/// The first iteration seeds the ensemble with uniform draws.
class Csa final : public Optimizer {
public:
  static constexpr double kInitialGenerationTemp = 0.1;
  static constexpr double kInitialAcceptanceTemp = 0.9;

  Csa(int dim, int num_opt, int max_iter, std::uint64_t seed = 42);

  const CandidatePoint& run(double cost) override;
  int num_points() const override { return num_opt_; }
  int dimension() const override { return dim_; }
  bool is_end() const override { return finished_; }

  /// Level 0 restores the temperatures and iteration budget but keeps the
  /// current solutions, their costs, and the best-ever record. Level 1
  /// additionally redraws the ensemble. Level 2 and above also clear the
  /// best-ever record. The random stream continues where it left off.
  void reset(int level) override;

  std::string describe() const override;

  int iteration() const { return iter_; }
  int max_iterations() const { return max_iter_; }
  double generation_temperature() const { return t_gen_; }
  double acceptance_temperature() const { return t_acc_; }
  double best_cost() const { return best_cost_; }
  const CandidatePoint& best_point() const { return best_point_; }

private:
  void draw_ensemble();
  void generate_probes();
  void finish_iteration();
  double unit_uniform();

  int dim_;
  int num_opt_;
  int max_iter_;
  double t_gen_ = kInitialGenerationTemp;
  double t_acc_ = kInitialAcceptanceTemp;
  int iter_ = 0;
  int anneal_steps_ = 0;  // generation rounds since construction/reset
  int cursor_ = 0;
  bool awaiting_cost_ = false;
  bool seeded_ = false;
  bool finished_ = false;
  std::vector<CandidatePoint> current_;
  std::vector<double> current_costs_;
  std::vector<CandidatePoint> probes_;
  std::vector<double> probe_costs_;
  CandidatePoint best_point_;
  double best_cost_;
  std::mt19937_64 rng_;
};

}  // namespace autotune
