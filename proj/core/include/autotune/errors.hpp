#pragma once

#include <stdexcept>
#include <string>

namespace autotune {

/// Invalid construction parameters (bad bounds, counts, tolerances).
class config_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// API misuse: calls out of sequence or with mismatched dimensions.
class usage_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A user-space value lies outside the configured search bounds.
class out_of_domain : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

}  // namespace autotune
