#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "adaprox/geometry.hpp"

namespace adaprox {

using GradientFn = std::function<Vector(const Vector&)>;

/// Convex objective with optional reference data used by rate checks.
struct Objective {
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> value;
  GradientFn gradient;
  std::optional<double> f_star;
  std::optional<Vector> minimizer;
  // Per-coordinate smoothness: f is 1-smooth w.r.t. ||.||_B, B = diag(smoothness).
  std::optional<Vector> smoothness;
  std::optional<double> lipschitz;
};

/// Monotone operator F with an optional duality-gap evaluator.
struct MonotoneOp {
  Eigen::Index dim = 0;
  GradientFn apply;
  std::function<double(const Vector&)> gap;
  std::optional<Vector> smoothness;
};

/// Zero-sum game min_x max_y x^T A y over a product of boxes.
struct BilinearGame {
  Matrix payoff;
  FeasibleSet x_domain;
  FeasibleSet y_domain;
  // Operator on the stacked point (x, y): F(x, y) = (A y, -A^T x).
  MonotoneOp op;
  FeasibleSet domain;
};

/// Thomas algorithm for a tridiagonal system. `lower` and `upper` have
/// length n - 1. Throws on a zero pivot.
Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper,
                         const Vector& rhs);

/// f(x) = 1/2 (x_1^2 + x_n^2 + sum (x_i - x_{i+1})^2) - x_1.
/// The minimizer is found at construction by a tridiagonal solve.
Objective nesterov_worst(int n);

/// f(x) = 1/2 sum beta_i (x_i - x*_i)^2. Requires beta_i >= 1.
Objective diag_quadratic(const Vector& beta, const Vector& x_star);

BilinearGame bilinear_game(const Matrix& payoff, const FeasibleSet& x_box, const FeasibleSet& y_box);

/// Gradient of an objective viewed as a monotone operator.
MonotoneOp gradient_operator(const Objective& objective);

/// Adds seeded zero-mean Gaussian noise to a deterministic oracle.
///
/// Each coordinate gets standard deviation sigma / sqrt(d), so the expected
/// squared norm of the noise is exactly sigma^2. Draw k depends only on
/// (seed, k); an oracle is single-owner state and must not be shared across
/// threads.
class StochasticOracle {
 public:
  StochasticOracle(GradientFn base, Eigen::Index dim, double sigma, std::uint64_t seed);

  /// base(x) + noise(counter), then advances the counter.
  Vector draw(const Vector& x);

  /// The noise vector for a given draw index.
  Vector noise(std::uint64_t counter) const;

  std::uint64_t counter() const { return counter_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index dim() const { return dim_; }

 private:
  GradientFn base_;
  Eigen::Index dim_;
  double sigma_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

StochasticOracle stochastic_wrap(const Objective& base, double sigma, std::uint64_t seed);
StochasticOracle stochastic_wrap(const MonotoneOp& base, double sigma, std::uint64_t seed);
Vector draw_gradient(StochasticOracle& oracle, const Vector& x);

}  // namespace adaprox
