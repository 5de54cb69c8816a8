#pragma once

#include <optional>
#include <variant>

#include <Eigen/Dense>

namespace adaprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ScalingMode { kPerCoordinate, kScalar };

/// Diagonal preconditioner D_t. Starts at the identity and only grows.
///
/// In scalar mode a single value is stored replicated across all coordinates
/// so the projection code does not need a separate path; updates then use the
/// squared l2 movement instead of per-coordinate movement.
class DiagonalScaling {
 public:
  explicit DiagonalScaling(Eigen::Index dim, ScalingMode mode = ScalingMode::kPerCoordinate);

  /// Builds a scaling from explicit entries. Throws if any entry is below 1
  /// or non-finite, or if scalar mode is requested with unequal entries.
  static DiagonalScaling from_values(Vector values, ScalingMode mode = ScalingMode::kPerCoordinate);

  const Vector& diag() const { return diag_; }
  double operator[](Eigen::Index i) const { return diag_[i]; }
  Eigen::Index dim() const { return diag_.size(); }
  ScalingMode mode() const { return mode_; }
  double trace() const { return diag_.sum(); }

  /// D_i^2 <- D_i^2 (1 + m_i / denom_sq), where m holds squared movements.
  /// Scalar mode applies the summed movement to every entry.
  void grow_by_movement(const Vector& movement_sq, double denom_sq);

  /// D_i^2 <- D_i^2 + increments_i (unconstrained AdaGrad style update).
  /// Scalar mode adds the summed increment.
  void add_squares(const Vector& increments);

 private:
  Vector diag_;
  ScalingMode mode_;
};

struct Unconstrained {};

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Convex domain K handed to the prox step.
class FeasibleSet {
 public:
  using Variant = std::variant<Unconstrained, Box, Ball>;

  FeasibleSet() : kind_(Unconstrained{}) {}

  static FeasibleSet unconstrained() { return FeasibleSet(); }
  /// Throws std::invalid_argument unless lower_i <= upper_i everywhere.
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet cube(Eigen::Index dim, double lower, double upper);
  static FeasibleSet ball(Vector center, double radius);

  const Variant& kind() const { return kind_; }
  bool is_unconstrained() const { return std::holds_alternative<Unconstrained>(kind_); }

  /// Dimension of the set; empty for Unconstrained which accepts any size.
  std::optional<Eigen::Index> dim() const;

  bool contains(const Vector& x, double slack = 0.0) const;

  /// Closest point of K in the Euclidean norm.
  Vector euclidean_projection(const Vector& x) const;

 private:
  explicit FeasibleSet(Variant v) : kind_(std::move(v)) {}
  Variant kind_;
};

double linf_diameter(const FeasibleSet& set);
double l2_diameter(const FeasibleSet& set);

struct ProjectionOptions {
  // Relative tolerance on | ||x - c|| - r | for the ball multiplier search.
  double ball_tolerance = 1e-12;
  int ball_max_iterations = 200;
};

/// argmin_{x in K} <g, x> + 1/2 ||x - anchor||_D^2.
///
/// Unconstrained: anchor - D^{-1} g. Box: coordinate-wise clamp of the
/// unconstrained step. Ball: bisection on the KKT multiplier mu of
/// x(mu) = (D + mu I)^{-1} (D anchor - g + mu center).
///
/// Throws std::invalid_argument on dimension mismatch, non-finite input,
/// or an anchor outside a Box/Ball.
Vector project_weighted(const Vector& g, const Vector& anchor, const DiagonalScaling& scaling,
                        const FeasibleSet& set, const ProjectionOptions& options = {});

}  // namespace adaprox
