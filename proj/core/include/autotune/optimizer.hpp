#pragma once

#include <string>

#include "autotune/domain.hpp"

namespace autotune {

/// Staged (ask/tell) optimizer contract.
///
/// run() consumes the cost of the candidate returned by the previous call
/// and yields the next candidate; the cost passed to the very first call
/// is discarded. Once is_end() turns true, run() keeps returning the
/// best-ever point and never changes it. Implementations are single-owner
/// state machines: run() must not be called concurrently, but the object
/// may move between threads between calls.
class Optimizer {
public:
  virtual ~Optimizer() = default;

  /// Next candidate in normalized coordinates. The reference stays valid
  /// until the next run()/reset() call.
  virtual const CandidatePoint& run(double cost) = 0;

  /// Number of solutions the algorithm works on per iteration.
  virtual int num_points() const = 0;

  virtual int dimension() const = 0;

  virtual bool is_end() const = 0;

  /// Restart the search. Level 0 is the lightest reset (keeps solutions
  /// found so far); higher levels discard progressively more state.
  virtual void reset(int level) { (void)level; }

  /// One-line state summary for verbose/debug output.
  virtual std::string describe() const { return {}; }
};

}  // namespace autotune
