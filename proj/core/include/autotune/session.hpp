#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "autotune/domain.hpp"
#include "autotune/errors.hpp"
#include "autotune/optimizer.hpp"

namespace autotune {

/// How candidates are rendered into the caller's point buffer.
enum class PointKind { integers, reals };

/// One fed cost sample, as seen by an optional trace sink.
struct TraceRecord {
  long eval_index;            // 1-based, counts fed samples only
  std::vector<double> point;  // rendered user-space values the cost measures
  double cost;
  double best_cost;  // smallest finite cost fed so far
};

struct SessionOptions {
  PointKind kind = PointKind::integers;
  /// Monotonic clock returning seconds; defaults to std::chrono::steady_clock.
  /// Injectable so timing semantics are testable.
  std::function<double()> clock{};
  /// Called once per fed sample.
  std::function<void(const TraceRecord&)> trace{};
};

/// A tuning session: owns the search domain, the optimizer, the warm-up
/// (ignore) logic, and wall-clock cost measurement around a user-marked
/// code section.
///
/// The measured section is delimited with start()/end(). start() writes
/// the candidate to try into the caller's buffer and starts the timer;
/// end() feeds the elapsed time to the optimizer as the candidate's cost.
/// Each candidate is presented ignore+1 times and only the last sample is
/// fed, so the system can settle before the measured run. Once the
/// optimizer finishes, the session latches the final solution: every
/// later interaction just writes it out and performs no optimizer work.
///
/// Sessions are single-owner; calls must not overlap, but the object may
/// move between threads between calls. The target invoked by the
/// pre-programmed drivers may itself be parallel — the session only
/// observes wall time around the whole invocation.
class TuningSession {
public:
  /// Session with the default optimizer (CSA). Total target executions at
  /// completion: max_iter * (ignore + 1) * num_opt.
  TuningSession(double lower, double upper, int ignore, int dim, int num_opt,
                int max_iter, std::uint64_t seed = 42, SessionOptions options = {});

  /// Session adopting a caller-supplied optimizer (must be fresh).
  TuningSession(double lower, double upper, int ignore,
                std::unique_ptr<Optimizer> optimizer, SessionOptions options = {});

  TuningSession(TuningSession&&) noexcept = default;
  TuningSession& operator=(TuningSession&&) noexcept = default;

  /// Opens the measured section: writes the candidate to try (or the final
  /// solution) into `point` and starts the timer.
  template <class P>
  void start(std::span<P> point) {
    if (section_open_) {
      throw usage_error("start() called twice without end()");
    }
    write_point(point);
    open_section();
  }

  /// Closes the measured section and feeds the elapsed time as the cost.
  void end();

  /// Caller-defined cost path: feeds `cost` for the previously returned
  /// point (ignored on the first call) and writes the next candidate.
  /// No code-section boundaries are implied.
  template <class P>
  void exec(std::span<P> point, double cost) {
    if (section_open_) {
      throw usage_error("exec() called inside an open measured section");
    }
    if (finished_) {
      if (presented_) ++target_execs_;
      write_point(point);
      return;
    }
    if (presented_) {
      ++target_execs_;
      take_sample(cost);
    }
    presented_ = true;
    write_point(point);
  }

  /// Runs the complete tuning loop against a replica of the target,
  /// measuring each invocation, and writes the final solution into
  /// `point`. The target is invoked as target(span<const P>, args...).
  template <class P, class F, class... Args>
  void entire_exec_runtime(F&& target, std::span<P> point, Args&&... args) {
    while (!finished_) {
      start(point);
      invoke_guarded(target, point, args...);
      end();
    }
    write_point(point);
  }

  /// As entire_exec_runtime, but the target returns its own cost value.
  template <class P, class F, class... Args>
  void entire_exec(F&& target, std::span<P> point, Args&&... args) {
    while (!finished_) {
      write_point(point);
      presented_ = true;
      const double cost = std::invoke(target, std::span<const P>(point), args...);
      ++target_execs_;
      take_sample(cost);
    }
    write_point(point);
  }

  /// One tuning step per call: start / target / end. After the optimizer
  /// finishes, the target still runs once per call with the final solution
  /// but nothing is measured. Passes the target's return value through.
  /// The buffer is refreshed after the sample, so it always leaves the
  /// call holding the point the next execution should use.
  template <class P, class F, class... Args>
  auto single_exec_runtime(F&& target, std::span<P> point, Args&&... args) {
    using R = std::invoke_result_t<F&, std::span<const P>, Args&...>;
    if (finished_) {
      write_point(point);
      return std::invoke(target, std::span<const P>(point), args...);
    }
    start(point);
    if constexpr (std::is_void_v<R>) {
      invoke_guarded(target, point, args...);
      end();
      write_point(point);
    } else {
      R result = invoke_guarded(target, point, args...);
      end();
      write_point(point);
      return result;
    }
  }

  /// As single_exec_runtime, but the target's return value is the cost.
  template <class P, class F, class... Args>
  double single_exec(F&& target, std::span<P> point, Args&&... args) {
    if (finished_) {
      write_point(point);
      return std::invoke(target, std::span<const P>(point), args...);
    }
    write_point(point);
    presented_ = true;
    const double cost = std::invoke(target, std::span<const P>(point), args...);
    ++target_execs_;
    take_sample(cost);
    write_point(point);
    return cost;
  }

  bool finished() const { return finished_; }
  int dimension() const { return domain_.dim; }
  int ignore() const { return ignore_; }
  PointKind kind() const { return kind_; }
  /// Target-method executions consumed so far.
  long target_execs() const { return target_execs_; }
  /// Costs fed to the optimizer so far.
  long fed_samples() const { return fed_samples_; }
  /// Smallest finite cost fed so far (+inf before the first sample).
  double best_cost() const { return best_cost_; }
  const SearchDomain& domain() const { return domain_; }
  Optimizer& optimizer() { return *optimizer_; }
  const Optimizer& optimizer() const { return *optimizer_; }
  /// Rendered values of the candidate currently being presented; the final
  /// solution once finished().
  const std::vector<double>& rendered_point() const { return rendered_; }

private:
  template <class P>
  void write_point(std::span<P> point) {
    static_assert(std::is_arithmetic_v<P> && !std::is_same_v<P, bool>,
                  "point type must be an integer or floating-point arithmetic type");
    if (static_cast<int>(point.size()) != domain_.dim) {
      throw usage_error("point buffer length does not match the tuned dimension");
    }
    if constexpr (std::is_integral_v<P>) {
      if (kind_ != PointKind::integers) {
        throw usage_error("session renders real values; integer buffer passed");
      }
    } else {
      if (kind_ != PointKind::reals) {
        throw usage_error("session renders integer values; floating-point buffer passed");
      }
    }
    for (std::size_t i = 0; i < point.size(); ++i) {
      point[i] = static_cast<P>(rendered_[i]);
    }
  }

  template <class F, class P, class... Args>
  decltype(auto) invoke_guarded(F& target, std::span<P> point, Args&... args) {
    try {
      return std::invoke(target, std::span<const P>(point), args...);
    } catch (...) {
      abort_section();
      throw;
    }
  }

  void open_section();
  void abort_section() noexcept;
  void take_sample(double cost);
  void render_pending();

  SearchDomain domain_;
  std::unique_ptr<Optimizer> optimizer_;
  int ignore_;
  PointKind kind_;
  std::function<double()> clock_;
  std::function<void(const TraceRecord&)> trace_;

  CandidatePoint pending_;        // candidate awaiting its cost
  std::vector<double> rendered_;  // pending_ in user units (final values once done)
  int reps_done_ = 0;             // completed warm-up repetitions of pending_
  bool presented_ = false;        // a point has been handed to the caller
  bool section_open_ = false;
  double timer_start_ = 0.0;  // meaningful iff section_open_
  bool finished_ = false;
  long target_execs_ = 0;
  long fed_samples_ = 0;
  double best_cost_;
};

}  // namespace autotune
