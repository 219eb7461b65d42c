#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace autotune {

/// Box search domain: one scalar [lower, upper] bound applied to every
/// tuned dimension. Optimizers never see user units; they work on the
/// normalized box [-1, 1]^dim and points are rendered at the boundary.
struct SearchDomain {
  double lower;
  double upper;
  int dim;

  /// Throws config_error unless lower < upper and dim >= 1.
  SearchDomain(double lower, double upper, int dim);

  /// Largest integer range contained in [lower, upper], as {lo, hi}.
  /// hi < lo means the domain contains no integer.
  std::pair<std::int64_t, std::int64_t> integer_range() const;
};

/// Normalized candidate: one coordinate per tuned dimension, each in [-1, 1].
struct CandidatePoint {
  std::vector<double> coords;

  int dimension() const { return static_cast<int>(coords.size()); }
};

/// Affine map from normalized coordinates to user units:
/// u = lower + (c + 1)/2 * (upper - lower).
std::vector<double> to_user(const CandidatePoint& point, const SearchDomain& domain);

/// Inverse of to_user. Throws out_of_domain if a value is outside
/// [lower, upper]; round-trip error stays below 1e-12 per coordinate.
CandidatePoint from_user(std::span<const double> values, const SearchDomain& domain);

/// Rounds user values half away from zero and clamps them into the
/// integer range of the domain. Throws config_error when the domain
/// contains no integer at all.
std::vector<std::int64_t> to_integer_values(std::span<const double> values,
                                            const SearchDomain& domain);

}  // namespace autotune
