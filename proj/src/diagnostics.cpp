#include "adaprox/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adaprox {

namespace {

constexpr double kSlack = 1e-9;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// a >= b up to relative slack.
bool at_least(double a, double b) { return a >= b - kSlack * (std::abs(a) + std::abs(b)); }

}  // namespace

RecurrenceTrace RecurrenceTrace::generate(double r_sq, double d0, std::vector<double> d_sq) {
  require(std::isfinite(r_sq) && r_sq > 0.0, "RecurrenceTrace: R^2 must be positive");
  require(std::isfinite(d0) && d0 > 0.0, "RecurrenceTrace: D_0 must be positive");
  std::vector<double> d;
  d.reserve(d_sq.size() + 1);
  d.push_back(d0);
  for (double inc : d_sq) {
    require(std::isfinite(inc) && inc >= 0.0, "RecurrenceTrace: increments must be >= 0");
    d.push_back(d.back() * std::sqrt(1.0 + inc / r_sq));
  }
  return RecurrenceTrace(r_sq, std::move(d_sq), std::move(d));
}

RecurrenceTrace RecurrenceTrace::observed(double r_sq, std::vector<double> d_sq, std::vector<double> d,
                                          double rel_tol) {
  require(std::isfinite(r_sq) && r_sq > 0.0, "RecurrenceTrace: R^2 must be positive");
  require(d.size() == d_sq.size() + 1, "RecurrenceTrace: need one more D than increments");
  require(d[0] > 0.0, "RecurrenceTrace: D_0 must be positive");
  for (std::size_t t = 0; t < d_sq.size(); ++t) {
    require(d_sq[t] >= 0.0, "RecurrenceTrace: increments must be >= 0");
    const double expected = d[t] * d[t] * (1.0 + d_sq[t] / r_sq);
    const double actual = d[t + 1] * d[t + 1];
    require(std::abs(actual - expected) <= rel_tol * expected,
            "RecurrenceTrace: sequence does not follow the recurrence");
  }
  return RecurrenceTrace(r_sq, std::move(d_sq), std::move(d));
}

RecurrenceReport check_recurrence_bounds(const RecurrenceTrace& trace, std::size_t a, std::size_t b) {
  require(a < b && b <= trace.length(), "check_recurrence_bounds: invalid window");
  const auto& d = trace.scaling();
  const auto& inc = trace.d_sq();
  const double r2 = trace.r_sq();

  double weighted = 0.0;
  double plain = 0.0;
  bool small_steps = true;
  for (std::size_t t = a; t < b; ++t) {
    weighted += d[t] * inc[t];
    plain += inc[t];
    small_steps = small_steps && inc[t] <= r2;
  }
  const double growth = d[b] - d[a];

  RecurrenceReport report;
  const double lower_rhs = 2.0 * r2 * growth;
  report.lower_margin = weighted - lower_rhs;
  report.lower_ok = at_least(weighted, lower_rhs);

  const double upper_rhs = (std::sqrt(2.0) + 1.0) * r2 * growth;
  const double log_rhs = 4.0 * r2 * std::log(d[b] / d[a]);
  report.upper_margin = upper_rhs - weighted;
  report.log_margin = log_rhs - plain;
  report.upper_applicable = small_steps;
  report.upper_ok = !small_steps || at_least(upper_rhs, weighted);
  report.log_ok = !small_steps || at_least(log_rhs, plain);
  return report;
}

SlopeEstimate estimate_rate(std::span<const double> t, std::span<const double> errors, double window_fraction) {
  require(t.size() == errors.size(), "estimate_rate: t and errors differ in length");
  require(!t.empty(), "estimate_rate: empty sequence");
  require(window_fraction >= 0.0 && window_fraction <= 1.0, "estimate_rate: window fraction must be in [0, 1]");
  const double t_max = *std::max_element(t.begin(), t.end());
  const double t_min = window_fraction * t_max;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  double lo = t_max;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_min || t[k] <= 0.0) continue;
    if (!(errors[k] > 0.0)) throw std::domain_error("estimate_rate: non-positive error inside the window");
    const double x = std::log(t[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    lo = std::min(lo, t[k]);
    ++n;
  }
  require(n >= 2, "estimate_rate: fewer than two samples in the window");
  const double nn = static_cast<double>(n);
  const double denom = nn * sxx - sx * sx;
  require(denom > 0.0, "estimate_rate: degenerate window");

  SlopeEstimate out;
  out.slope = (nn * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / nn;
  out.t_lo = lo;
  out.t_hi = t_max;
  out.samples = n;
  return out;
}

SlopeEstimate estimate_rate(std::span<const double> errors, double window_fraction) {
  std::vector<double> t(errors.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k + 1);
  return estimate_rate(t, errors, window_fraction);
}

SlopeEstimate estimate_rate(const RunTrace& trace, double window_fraction) {
  std::vector<double> t;
  std::vector<double> e;
  t.reserve(trace.rows.size());
  e.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    t.push_back(row.t);
    e.push_back(row.value);
  }
  return estimate_rate(t, e, window_fraction);
}

namespace {

BoundReport check_bound(const RunTrace& trace, Theorem theorem, const Vector& beta, double radius) {
  require(!trace.rows.empty(), "check_theorem_bound: empty trace");
  require(std::isfinite(radius) && radius > 0.0, "check_theorem_bound: radius must be positive");
  require(beta.size() > 0 && beta.minCoeff() >= 1.0, "check_theorem_bound: smoothness entries must be >= 1");
  const double r2 = radius * radius;
  BoundReport report;
  std::ostringstream detail;

  if (theorem == Theorem::kAdaGradUnconstrained) {
    const double numerator = r2 * beta.sum();
    report.ok = true;
    for (const auto& row : trace.rows) {
      const double bound = numerator / row.t;
      const double ratio = row.value / bound;
      report.worst_ratio = std::max(report.worst_ratio, ratio);
      if (row.value > bound) {
        if (report.ok) detail << "bound violated at T=" << row.t << " (" << row.value << " > " << bound << ")";
        report.ok = false;
      }
    }
    if (report.ok) detail << "value <= R^2 sum(beta)/T on all " << trace.rows.size() << " rows";
    report.detail = detail.str();
    return report;
  }

  const double power = (theorem == Theorem::kAdaAcsaSmooth || theorem == Theorem::kAdaAgdPlusSmooth) ? 2.0 : 1.0;
  const double scale = r2 * (beta.array() * (2.0 * beta.array()).log()).sum();
  const double t_max = trace.rows.back().t;
  const double t_start = t_max / 10.0;

  constexpr int kBlocks = 5;
  std::vector<double> block_max(kBlocks, -1.0);
  for (const auto& row : trace.rows) {
    if (row.t < t_start) continue;
    const double ratio = std::max(row.value, 0.0) * std::pow(row.t, power) / scale;
    int block = static_cast<int>(std::floor(kBlocks * std::log10(row.t / t_start)));
    block = std::clamp(block, 0, kBlocks - 1);
    block_max[block] = std::max(block_max[block], ratio);
    report.worst_ratio = std::max(report.worst_ratio, ratio);
  }
  for (double c : block_max) {
    if (c >= 0.0) report.block_constants.push_back(c);
  }
  report.ok = std::isfinite(report.worst_ratio);
  for (std::size_t k = 1; k < report.block_constants.size(); ++k) {
    const double prev = report.block_constants[k - 1];
    const double cur = report.block_constants[k];
    if (cur > prev * (1.0 + kSlack) + 1e-300) {
      if (report.ok) detail << "fitted constant increased in block " << k << " (" << prev << " -> " << cur << ")";
      report.ok = false;
    }
  }
  if (report.ok) detail << "fitted constant non-increasing over the final decade, max " << report.worst_ratio;
  report.detail = detail.str();
  return report;
}

}  // namespace

BoundReport check_theorem_bound(const RunTrace& trace, Theorem theorem, const Objective& problem, double radius) {
  require(problem.f_star.has_value(), "check_theorem_bound: problem has no known optimum");
  require(problem.smoothness.has_value(), "check_theorem_bound: problem has no smoothness vector");
  return check_bound(trace, theorem, *problem.smoothness, radius);
}

BoundReport check_theorem_bound(const RunTrace& trace, Theorem theorem, const MonotoneOp& problem, double radius) {
  require(static_cast<bool>(problem.gap), "check_theorem_bound: operator has no gap evaluator");
  require(problem.smoothness.has_value(), "check_theorem_bound: operator has no smoothness vector");
  return check_bound(trace, theorem, *problem.smoothness, radius);
}

TraceComparison compare_traces(std::span<const Vector> a, std::span<const Vector> b, double tol) {
  require(a.size() == b.size(), "compare_traces: traces differ in length");
  TraceComparison out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    require(a[k].size() == b[k].size(), "compare_traces: dimension mismatch");
    if (a[k].size() == 0) continue;
    out.max_deviation = std::max(out.max_deviation, (a[k] - b[k]).cwiseAbs().maxCoeff());
  }
  out.within_tolerance = out.max_deviation <= tol;
  return out;
}

}  // namespace adaprox
