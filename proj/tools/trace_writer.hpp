#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "autotune/session.hpp"

namespace autotune::cli {

enum class OutputFormat { csv, json };

/// Shortest stable rendering that survives a round-trip through strtod.
inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Streams trace records as CSV rows (with a header) or as one JSON
/// object per line. Both encodings carry the same keys and the same
/// number rendering, so runs are trivially diffable.
class TraceWriter {
public:
  TraceWriter(std::ostream& out, OutputFormat format, int dim)
      : out_(out), format_(format), dim_(dim) {
    if (format_ == OutputFormat::csv) {
      out_ << "eval_index";
      for (int d = 0; d < dim_; ++d) out_ << ",point_" << d;
      out_ << ",cost,best_cost\n";
    }
  }

  void write(const TraceRecord& record) {
    if (format_ == OutputFormat::csv) {
      out_ << record.eval_index;
      for (int d = 0; d < dim_; ++d) out_ << ',' << format_value(record.point[d]);
      out_ << ',' << format_value(record.cost) << ',' << format_value(record.best_cost)
           << '\n';
    } else {
      out_ << "{\"eval_index\":" << record.eval_index;
      for (int d = 0; d < dim_; ++d) {
        out_ << ",\"point_" << d << "\":" << json_number(record.point[d]);
      }
      out_ << ",\"cost\":" << json_number(record.cost)
           << ",\"best_cost\":" << json_number(record.best_cost) << "}\n";
    }
  }

private:
  static std::string json_number(double v) {
    return std::isfinite(v) ? format_value(v) : "null";  // JSON has no inf/nan
  }

  std::ostream& out_;
  OutputFormat format_;
  int dim_;
};

}  // namespace autotune::cli
