#include "autotune/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "autotune/errors.hpp"

namespace autotune {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Cost spread below which the simplex is considered numerically flat and a
// shrink is forced instead of a reflection that cannot make progress.
constexpr double kDegenerateSpread = 1e-15;

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

NelderMead::NelderMead(int dim, double error_tol, int max_iter, std::uint64_t seed)
    : dim_(dim), error_tol_(error_tol), max_iter_(max_iter), rng_(seed) {
  if (dim < 1) {
    throw config_error("Nelder-Mead requires dim >= 1");
  }
  if (!(error_tol > 0.0) || !std::isfinite(error_tol)) {
    throw config_error("Nelder-Mead requires error_tol > 0");
  }
  if (max_iter < 0) {
    throw config_error("Nelder-Mead requires max_iter >= 0");
  }
  build_initial_simplex();
  best_point_ = vertices_[0];
  best_cost_ = kInf;
  pending_ = vertices_[0];
}

void NelderMead::build_initial_simplex() {
  vertices_.assign(dim_ + 1, CandidatePoint{});
  costs_.assign(dim_ + 1, kInf);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  vertices_[0].coords.resize(dim_);
  for (double& c : vertices_[0].coords) c = box(rng_);
  for (int k = 1; k <= dim_; ++k) {
    vertices_[k] = vertices_[0];
    double& c = vertices_[k].coords[k - 1];
    c += 0.5;
    if (c > 1.0) c = 2.0 - c;  // reflect back into the box
  }
}

void NelderMead::restart_machine() {
  evals_ = 0;
  eval_index_ = 0;
  stage_ = Stage::EvalInitial;
  awaiting_cost_ = false;
  std::fill(costs_.begin(), costs_.end(), kInf);
  pending_ = vertices_[0];
}

bool NelderMead::budget_exhausted() const {
  return max_iter_ > 0 && evals_ >= max_iter_;
}

void NelderMead::order_simplex() {
  best_index_ = 0;
  worst_index_ = 0;
  for (int i = 1; i <= dim_; ++i) {
    if (costs_[i] < costs_[best_index_]) best_index_ = i;
    if (costs_[i] > costs_[worst_index_]) worst_index_ = i;
  }
  second_worst_cost_ = -kInf;
  for (int i = 0; i <= dim_; ++i) {
    if (i != worst_index_) second_worst_cost_ = std::max(second_worst_cost_, costs_[i]);
  }
  centroid_.coords.assign(dim_, 0.0);
  for (int i = 0; i <= dim_; ++i) {
    if (i == worst_index_) continue;
    for (int d = 0; d < dim_; ++d) centroid_.coords[d] += vertices_[i].coords[d];
  }
  for (double& c : centroid_.coords) c /= static_cast<double>(dim_);
}

void NelderMead::replace_worst(const CandidatePoint& point, double cost) {
  vertices_[worst_index_] = point;
  costs_[worst_index_] = cost;
}

void NelderMead::begin_shrink() {
  order_simplex();
  shrink_targets_.clear();
  for (int i = 0; i <= dim_; ++i) {
    if (i != best_index_) shrink_targets_.push_back(i);
  }
  const CandidatePoint best = vertices_[best_index_];
  for (int t : shrink_targets_) {
    for (int d = 0; d < dim_; ++d) {
      vertices_[t].coords[d] =
          clamp_unit(best.coords[d] + kShrink * (vertices_[t].coords[d] - best.coords[d]));
    }
  }
  shrink_cursor_ = 0;
  pending_ = vertices_[shrink_targets_[0]];
  stage_ = Stage::AwaitShrink;
}

void NelderMead::advance_iteration() {
  bool all_finite = true;
  for (double c : costs_) all_finite = all_finite && std::isfinite(c);
  if (all_finite) {
    double mean = 0.0;
    for (double c : costs_) mean += c;
    mean /= static_cast<double>(dim_ + 1);
    double ssq = 0.0;
    for (double c : costs_) ssq += (c - mean) * (c - mean);
    const double stddev = std::sqrt(ssq / static_cast<double>(dim_));
    if (stddev < error_tol_) {
      stage_ = Stage::Finished;
      return;
    }
    const auto [lo, hi] = std::minmax_element(costs_.begin(), costs_.end());
    if (*hi - *lo <= kDegenerateSpread) {
      // Flat but not converged (tiny error_tol); force a shrink.
      begin_shrink();
      return;
    }
  }
  order_simplex();
  pending_.coords.resize(dim_);
  for (int d = 0; d < dim_; ++d) {
    pending_.coords[d] = clamp_unit(
        centroid_.coords[d] +
        kReflection * (centroid_.coords[d] - vertices_[worst_index_].coords[d]));
  }
  stage_ = Stage::AwaitReflect;
}

void NelderMead::consume(double cost) {
  const double c = std::isfinite(cost) ? cost : kInf;
  ++evals_;
  if (c < best_cost_) {
    best_cost_ = c;
    best_point_ = pending_;
  }

  switch (stage_) {
    case Stage::EvalInitial:
      costs_[eval_index_] = c;
      if (budget_exhausted()) break;
      ++eval_index_;
      if (eval_index_ <= dim_) {
        pending_ = vertices_[eval_index_];
        return;
      }
      advance_iteration();
      return;

    case Stage::AwaitReflect: {
      reflect_point_ = pending_;
      reflect_cost_ = c;
      if (budget_exhausted()) break;
      if (c < costs_[best_index_]) {
        for (int d = 0; d < dim_; ++d) {
          pending_.coords[d] = clamp_unit(
              centroid_.coords[d] + kExpansion * (reflect_point_.coords[d] - centroid_.coords[d]));
        }
        stage_ = Stage::AwaitExpand;
        return;
      }
      if (c < second_worst_cost_) {
        replace_worst(reflect_point_, c);
        advance_iteration();
        return;
      }
      contract_outside_ = c < costs_[worst_index_];
      for (int d = 0; d < dim_; ++d) {
        const double towards =
            contract_outside_ ? reflect_point_.coords[d] : vertices_[worst_index_].coords[d];
        pending_.coords[d] =
            clamp_unit(centroid_.coords[d] + kContraction * (towards - centroid_.coords[d]));
      }
      stage_ = Stage::AwaitContract;
      return;
    }

    case Stage::AwaitExpand:
      if (budget_exhausted()) break;
      if (c < reflect_cost_) {
        replace_worst(pending_, c);
      } else {
        replace_worst(reflect_point_, reflect_cost_);
      }
      advance_iteration();
      return;

    case Stage::AwaitContract: {
      if (budget_exhausted()) break;
      const bool accept =
          contract_outside_ ? c <= reflect_cost_ : c < costs_[worst_index_];
      if (accept) {
        replace_worst(pending_, c);
        advance_iteration();
      } else {
        begin_shrink();
      }
      return;
    }

    case Stage::AwaitShrink:
      costs_[shrink_targets_[shrink_cursor_]] = c;
      if (budget_exhausted()) break;
      ++shrink_cursor_;
      if (shrink_cursor_ < shrink_targets_.size()) {
        pending_ = vertices_[shrink_targets_[shrink_cursor_]];
        return;
      }
      advance_iteration();
      return;

    case Stage::Finished:
      return;
  }
  stage_ = Stage::Finished;
}

const CandidatePoint& NelderMead::run(double cost) {
  if (stage_ == Stage::Finished) return best_point_;
  if (awaiting_cost_) {
    consume(cost);
    if (stage_ == Stage::Finished) {
      awaiting_cost_ = false;
      return best_point_;
    }
  }
  awaiting_cost_ = true;
  return pending_;
}

void NelderMead::reset(int level) {
  if (level < 0) {
    throw usage_error("reset level must be non-negative");
  }
  if (level >= 1) {
    build_initial_simplex();
  }
  if (level >= 2) {
    best_point_ = vertices_[0];
    best_cost_ = kInf;
  }
  restart_machine();
}

const char* NelderMead::stage_name(Stage s) {
  switch (s) {
    case Stage::EvalInitial: return "eval-initial";
    case Stage::AwaitReflect: return "reflect";
    case Stage::AwaitExpand: return "expand";
    case Stage::AwaitContract: return "contract";
    case Stage::AwaitShrink: return "shrink";
    case Stage::Finished: return "finished";
  }
  return "?";
}

std::string NelderMead::describe() const {
  std::ostringstream out;
  out << "NM dim=" << dim_ << " stage=" << stage_name(stage_) << " evals=" << evals_
      << " best_cost=" << best_cost_ << " vertices=";
  for (int i = 0; i <= dim_; ++i) {
    out << (i == 0 ? "[" : " ") << "(";
    for (int d = 0; d < dim_; ++d) {
      if (d) out << ",";
      out << vertices_[i].coords[d];
    }
    out << ")=" << costs_[i];
  }
  out << "]";
  return out.str();
}

}  // namespace autotune
