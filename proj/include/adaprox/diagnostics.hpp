#pragma once

#include <span>
#include <string>
#include <vector>

#include "adaprox/geometry.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/trace.hpp"

namespace adaprox {

/// Scalar sequence with D_{t+1}^2 = D_t^2 (1 + d_t^2 / R^2).
class RecurrenceTrace {
 public:
  /// Generates D_0..D_n from the increments.
  static RecurrenceTrace generate(double r_sq, double d0, std::vector<double> d_sq);

  /// Wraps a D sequence produced elsewhere (e.g. one coordinate of an
  /// optimizer's preconditioner). Throws std::invalid_argument unless the
  /// recurrence holds to `rel_tol`.
  static RecurrenceTrace observed(double r_sq, std::vector<double> d_sq, std::vector<double> d,
                                  double rel_tol = 1e-10);

  double r_sq() const { return r_sq_; }
  const std::vector<double>& d_sq() const { return d_sq_; }
  /// D_0..D_n, one longer than d_sq().
  const std::vector<double>& scaling() const { return d_; }
  std::size_t length() const { return d_sq_.size(); }

 private:
  RecurrenceTrace(double r_sq, std::vector<double> d_sq, std::vector<double> d)
      : r_sq_(r_sq), d_sq_(std::move(d_sq)), d_(std::move(d)) {}

  double r_sq_;
  std::vector<double> d_sq_;
  std::vector<double> d_;
};

struct RecurrenceReport {
  bool lower_ok = false;
  bool upper_ok = false;
  bool log_ok = false;
  // The upper and log inequalities need d_t^2 <= R^2 on the window; when
  // that fails they hold vacuously and are reported as ok.
  bool upper_applicable = false;
  // lhs - rhs for the lower bound, rhs - lhs for the others (>= 0 is good).
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  double log_margin = 0.0;

  bool ok() const { return lower_ok && upper_ok && log_ok; }
};

/// Evaluates, for the window [a, b):
///   sum D_t d_t^2 >= 2 R^2 (D_b - D_a)
///   sum D_t d_t^2 <= (sqrt 2 + 1) R^2 (D_b - D_a)     (if d_t^2 <= R^2)
///   sum d_t^2     <= 4 R^2 ln(D_b / D_a)               (if d_t^2 <= R^2)
/// with 1e-9 relative slack.
RecurrenceReport check_recurrence_bounds(const RecurrenceTrace& trace, std::size_t a, std::size_t b);

struct SlopeEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of ln(error) against ln(t) over t in
/// [window_fraction * t_max, t_max]. Throws std::domain_error if any error in
/// the window is non-positive.
SlopeEstimate estimate_rate(std::span<const double> t, std::span<const double> errors,
                            double window_fraction);
/// Same, with t = 1..n.
SlopeEstimate estimate_rate(std::span<const double> errors, double window_fraction);
SlopeEstimate estimate_rate(const RunTrace& trace, double window_fraction);

enum class Theorem {
  kAdaGradPlusSmooth,
  kAdaAcsaSmooth,
  kAdaAgdPlusSmooth,
  kAdaGradUnconstrained,
  kAdaMpSmooth,
};

struct BoundReport {
  bool ok = false;
  // Explicit AdaGrad check: max over rows of value / bound.
  // O(.) checks: max normalized ratio over the final decade.
  double worst_ratio = 0.0;
  // O(.) checks only: block maxima of the normalized ratio, in time order.
  std::vector<double> block_constants;
  std::string detail;
};

/// Checks a run trace against a smooth-case rate.
///
/// kAdaGradUnconstrained is explicit: value_T <= R^2 sum(beta) / T at every
/// row. The others only bound value * T^p / (R^2 sum beta_i ln(2 beta_i)) by a
/// constant; since that constant is unknown, the check is that block maxima of
/// this ratio over the final decade never increase.
///
/// Throws std::invalid_argument when the problem lacks f* (objectives) or
/// smoothness.
BoundReport check_theorem_bound(const RunTrace& trace, Theorem theorem, const Objective& problem,
                                double radius);
BoundReport check_theorem_bound(const RunTrace& trace, Theorem theorem, const MonotoneOp& problem,
                                double radius);

struct TraceComparison {
  double max_deviation = 0.0;
  bool within_tolerance = false;
};

/// max_t ||a_t - b_t||_inf. Throws on length or dimension mismatch.
TraceComparison compare_traces(std::span<const Vector> a, std::span<const Vector> b, double tol);

}  // namespace adaprox
