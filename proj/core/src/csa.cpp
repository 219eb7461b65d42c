#include "autotune/csa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "autotune/errors.hpp"

namespace autotune {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Cap fed into the exp() trick so +inf costs (rejected measurements kept in
// the ensemble during seeding) cannot produce inf - inf.
constexpr double kCostCap = 1e300;
constexpr double kAcceptanceTempUp = 1.05;
constexpr double kAcceptanceTempDown = 0.95;

// Folds x into [-1, 1] by reflecting at the box walls as often as needed.
double reflect_into_unit(double x) {
  double t = std::fmod(x + 1.0, 4.0);
  if (t < 0.0) t += 4.0;
  return t < 2.0 ? t - 1.0 : 3.0 - t;
}

double variance_target(int num_opt) {
  const double m = static_cast<double>(num_opt);
  return 0.99 * (m - 1.0) / (m * m);
}

}  // namespace

std::vector<double> coupled_acceptance_probabilities(std::span<const double> costs,
                                                     double t_acc) {
  if (costs.size() < 2) {
    throw usage_error("coupled acceptance needs at least two annealers");
  }
  if (!(t_acc > 0.0)) {
    throw config_error("acceptance temperature must be positive");
  }
  std::vector<double> probs(costs.size());
  double max_cost = -kInf;
  for (double c : costs) {
    max_cost = std::max(max_cost, std::clamp(c, -kCostCap, kCostCap));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    // Floor keeps the entries strictly positive when exp underflows.
    probs[i] = std::max(
        std::exp((std::clamp(costs[i], -kCostCap, kCostCap) - max_cost) / t_acc),
        std::numeric_limits<double>::min());
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double metropolis_acceptance(double cost_new, double cost_old, double t_acc) {
  if (!(t_acc > 0.0)) {
    throw config_error("acceptance temperature must be positive");
  }
  if (cost_new <= cost_old) return 1.0;
  return std::exp(-(cost_new - cost_old) / t_acc);
}

Csa::Csa(int dim, int num_opt, int max_iter, std::uint64_t seed)
    : dim_(dim), num_opt_(num_opt), max_iter_(max_iter), rng_(seed) {
  if (dim < 1 || num_opt < 1 || max_iter < 1) {
    throw config_error("CSA requires dim, num_opt and max_iter >= 1");
  }
  current_.resize(num_opt_);
  current_costs_.assign(num_opt_, kInf);
  probes_.resize(num_opt_);
  probe_costs_.assign(num_opt_, kInf);
  draw_ensemble();
  best_point_ = probes_[0];
  best_cost_ = kInf;
}

double Csa::unit_uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
}

void Csa::draw_ensemble() {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (auto& probe : probes_) {
    probe.coords.resize(dim_);
    for (double& c : probe.coords) c = box(rng_);
  }
}

void Csa::generate_probes() {
  t_gen_ = kInitialGenerationTemp / static_cast<double>(anneal_steps_ + 1);
  ++anneal_steps_;
  for (int i = 0; i < num_opt_; ++i) {
    probes_[i].coords.resize(dim_);
    for (int d = 0; d < dim_; ++d) {
      double r = unit_uniform();
      while (r == 0.0) r = unit_uniform();
      const double step = t_gen_ * std::tan(std::numbers::pi * (r - 0.5));
      probes_[i].coords[d] = reflect_into_unit(current_[i].coords[d] + step);
    }
  }
}

void Csa::finish_iteration() {
  if (!seeded_) {
    // Seeding pass: the freshly costed draws become the ensemble.
    current_ = probes_;
    current_costs_ = probe_costs_;
    seeded_ = true;
    ++iter_;
    return;
  }

  if (num_opt_ == 1) {
    // Coupling is constant for one annealer; fall back to Metropolis.
    const double probe = probe_costs_[0];
    if (std::isfinite(probe) &&
        (probe <= current_costs_[0] ||
         unit_uniform() < metropolis_acceptance(probe, current_costs_[0], t_acc_))) {
      current_[0] = probes_[0];
      current_costs_[0] = probe;
    }
    t_acc_ *= kAcceptanceTempDown;
    ++iter_;
    return;
  }

  const auto probs = coupled_acceptance_probabilities(current_costs_, t_acc_);
  for (int i = 0; i < num_opt_; ++i) {
    const double probe = probe_costs_[i];
    if (!std::isfinite(probe)) continue;  // failed measurement, reject
    if (probe <= current_costs_[i] || unit_uniform() < probs[i]) {
      current_[i] = probes_[i];
      current_costs_[i] = probe;
    }
  }

  // Variance control: steer the spread of the acceptance probabilities
  // towards 99% of its maximum so the ensemble stays diversified.
  const double mean = 1.0 / static_cast<double>(num_opt_);
  double variance = 0.0;
  for (double p : probs) variance += (p - mean) * (p - mean);
  variance /= static_cast<double>(num_opt_);
  t_acc_ *= variance > variance_target(num_opt_) ? kAcceptanceTempUp : kAcceptanceTempDown;
  ++iter_;
}

const CandidatePoint& Csa::run(double cost) {
  if (finished_) return best_point_;
  if (awaiting_cost_) {
    const double recorded = std::isfinite(cost) ? cost : kInf;
    probe_costs_[cursor_] = recorded;
    if (recorded < best_cost_) {
      best_cost_ = recorded;
      best_point_ = probes_[cursor_];
    }
    ++cursor_;
    if (cursor_ == num_opt_) {
      finish_iteration();
      if (iter_ >= max_iter_) {
        finished_ = true;
        awaiting_cost_ = false;
        return best_point_;
      }
      generate_probes();
      cursor_ = 0;
    }
  }
  awaiting_cost_ = true;
  return probes_[cursor_];
}

void Csa::reset(int level) {
  if (level < 0) {
    throw usage_error("reset level must be non-negative");
  }
  t_gen_ = kInitialGenerationTemp;
  t_acc_ = kInitialAcceptanceTemp;
  iter_ = 0;
  anneal_steps_ = 0;
  cursor_ = 0;
  awaiting_cost_ = false;
  finished_ = false;
  if (level == 0) {
    // Keep solutions, costs and best; restart the annealing schedule.
    if (seeded_) generate_probes();
    return;
  }
  seeded_ = false;
  current_costs_.assign(num_opt_, kInf);
  draw_ensemble();
  if (level >= 2) {
    best_point_ = probes_[0];
    best_cost_ = kInf;
  }
}

std::string Csa::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "CSA dim=%d num_opt=%d iter=%d/%d t_gen=%g t_acc=%g best_cost=%g",
                dim_, num_opt_, iter_, max_iter_, t_gen_, t_acc_, best_cost_);
  return buf;
}

}  // namespace autotune
