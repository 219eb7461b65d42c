#include "autotune/session.hpp"

#include <chrono>
#include <limits>

#include "autotune/csa.hpp"

namespace autotune {

namespace {

double steady_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int checked_dimension(const std::unique_ptr<Optimizer>& optimizer) {
  if (!optimizer) {
    throw config_error("session requires an optimizer");
  }
  return optimizer->dimension();
}

}  // namespace

TuningSession::TuningSession(double lower, double upper, int ignore, int dim,
                             int num_opt, int max_iter, std::uint64_t seed,
                             SessionOptions options)
    : TuningSession(lower, upper, ignore,
                    std::make_unique<Csa>(dim, num_opt, max_iter, seed),
                    std::move(options)) {}

TuningSession::TuningSession(double lower, double upper, int ignore,
                             std::unique_ptr<Optimizer> optimizer,
                             SessionOptions options)
    : domain_(lower, upper, checked_dimension(optimizer)),
      optimizer_(std::move(optimizer)),
      ignore_(ignore),
      kind_(options.kind),
      clock_(std::move(options.clock)),
      trace_(std::move(options.trace)),
      best_cost_(std::numeric_limits<double>::infinity()) {
  if (ignore_ < 0) {
    throw config_error("ignore count must be non-negative");
  }
  if (optimizer_->is_end()) {
    throw config_error("session requires a fresh optimizer");
  }
  if (kind_ == PointKind::integers) {
    const auto [lo, hi] = domain_.integer_range();
    if (hi < lo) {
      throw config_error("integer rendering requested but bounds contain no integer");
    }
  }
  if (!clock_) clock_ = steady_seconds;
  // The first run call's cost is discarded by contract.
  pending_ = optimizer_->run(0.0);
  render_pending();
}

void TuningSession::render_pending() {
  rendered_ = to_user(pending_, domain_);
  if (kind_ == PointKind::integers) {
    const auto ints = to_integer_values(rendered_, domain_);
    for (std::size_t i = 0; i < ints.size(); ++i) {
      rendered_[i] = static_cast<double>(ints[i]);
    }
  }
}

void TuningSession::open_section() {
  timer_start_ = clock_();
  section_open_ = true;
  presented_ = true;
}

void TuningSession::abort_section() noexcept { section_open_ = false; }

void TuningSession::end() {
  if (!section_open_) {
    throw usage_error("end() called without an open measured section");
  }
  const double elapsed = clock_() - timer_start_;
  section_open_ = false;
  ++target_execs_;
  take_sample(elapsed);
}

void TuningSession::take_sample(double cost) {
  if (finished_) return;  // final solution latched; nothing to measure
  if (reps_done_ < ignore_) {
    ++reps_done_;  // warm-up repetition, sample discarded
    return;
  }
  if (std::isfinite(cost) && cost < best_cost_) best_cost_ = cost;
  ++fed_samples_;
  if (trace_) {
    trace_(TraceRecord{fed_samples_, rendered_, cost, best_cost_});
  }
  pending_ = optimizer_->run(cost);
  reps_done_ = 0;
  render_pending();
  if (optimizer_->is_end()) finished_ = true;
}

}  // namespace autotune
