#pragma once

#include <vector>

namespace adaprox {

struct TraceRow {
  int t = 0;
  // f(solution) - f* when f* is known, f(solution) otherwise, or the duality
  // gap for operator problems.
  double value = 0.0;
  double trace_d = 0.0;
  double movement = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct RunTrace {
  std::vector<TraceRow> rows;

  bool operator==(const RunTrace&) const = default;
};

}  // namespace adaprox
