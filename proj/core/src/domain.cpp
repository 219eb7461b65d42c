#include "autotune/domain.hpp"

#include <algorithm>
#include <cmath>

#include "autotune/errors.hpp"

namespace autotune {

SearchDomain::SearchDomain(double lower_, double upper_, int dim_)
    : lower(lower_), upper(upper_), dim(dim_) {
  if (!(lower < upper)) {
    throw config_error("search domain requires lower < upper");
  }
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw config_error("search domain bounds must be finite");
  }
  if (dim < 1) {
    throw config_error("search domain requires dim >= 1");
  }
}

std::pair<std::int64_t, std::int64_t> SearchDomain::integer_range() const {
  return {static_cast<std::int64_t>(std::ceil(lower)),
          static_cast<std::int64_t>(std::floor(upper))};
}

std::vector<double> to_user(const CandidatePoint& point, const SearchDomain& domain) {
  if (point.dimension() != domain.dim) {
    throw usage_error("candidate dimension does not match search domain");
  }
  std::vector<double> out(point.coords.size());
  const double span = domain.upper - domain.lower;
  for (std::size_t i = 0; i < point.coords.size(); ++i) {
    out[i] = domain.lower + (point.coords[i] + 1.0) * 0.5 * span;
  }
  return out;
}

CandidatePoint from_user(std::span<const double> values, const SearchDomain& domain) {
  if (static_cast<int>(values.size()) != domain.dim) {
    throw usage_error("value count does not match search domain");
  }
  CandidatePoint point;
  point.coords.resize(values.size());
  const double span = domain.upper - domain.lower;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= domain.lower && values[i] <= domain.upper)) {
      throw out_of_domain("value outside search bounds");
    }
    // Clamp shaves off the last-ulp excursions of the affine inverse.
    point.coords[i] = std::clamp((values[i] - domain.lower) / span * 2.0 - 1.0, -1.0, 1.0);
  }
  return point;
}

std::vector<std::int64_t> to_integer_values(std::span<const double> values,
                                            const SearchDomain& domain) {
  const auto [lo, hi] = domain.integer_range();
  if (hi < lo) {
    throw config_error("search bounds contain no integer");
  }
  std::vector<std::int64_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto rounded = static_cast<std::int64_t>(std::llround(values[i]));
    out[i] = std::clamp(rounded, lo, hi);
  }
  return out;
}

}  // namespace autotune
