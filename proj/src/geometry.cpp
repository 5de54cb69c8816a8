#include "adaprox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adaprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool all_finite(const Vector& v) { return v.allFinite(); }

// Feasibility slack for anchors. Iterates built as convex combinations of
// feasible points may land an ulp or so outside the set.
double anchor_slack(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

}  // namespace

DiagonalScaling::DiagonalScaling(Eigen::Index dim, ScalingMode mode)
    : diag_(Vector::Ones(dim)), mode_(mode) {
  require(dim > 0, "DiagonalScaling: dimension must be positive");
}

DiagonalScaling DiagonalScaling::from_values(Vector values, ScalingMode mode) {
  require(values.size() > 0, "DiagonalScaling: empty values");
  require(all_finite(values), "DiagonalScaling: non-finite entry");
  require(values.minCoeff() >= 1.0, "DiagonalScaling: entries must be >= 1");
  if (mode == ScalingMode::kScalar) {
    require(values.maxCoeff() == values.minCoeff(), "DiagonalScaling: scalar mode needs equal entries");
  }
  DiagonalScaling out(values.size(), mode);
  out.diag_ = std::move(values);
  return out;
}

void DiagonalScaling::grow_by_movement(const Vector& movement_sq, double denom_sq) {
  require(movement_sq.size() == diag_.size(), "grow_by_movement: dimension mismatch");
  require(denom_sq > 0.0, "grow_by_movement: denominator must be positive");
  if (mode_ == ScalingMode::kScalar) {
    const double factor = 1.0 + movement_sq.sum() / denom_sq;
    diag_ *= std::sqrt(factor);
    return;
  }
  for (Eigen::Index i = 0; i < diag_.size(); ++i) {
    diag_[i] *= std::sqrt(1.0 + movement_sq[i] / denom_sq);
  }
}

void DiagonalScaling::add_squares(const Vector& increments) {
  require(increments.size() == diag_.size(), "add_squares: dimension mismatch");
  if (mode_ == ScalingMode::kScalar) {
    const double d = diag_[0];
    diag_.setConstant(std::sqrt(d * d + increments.sum()));
    return;
  }
  diag_ = (diag_.array().square() + increments.array()).sqrt().matrix();
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  require(lower.size() == upper.size(), "box: bound dimensions differ");
  require(lower.size() > 0, "box: empty bounds");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    require(!std::isnan(lower[i]) && !std::isnan(upper[i]), "box: NaN bound");
    require(lower[i] <= upper[i], "box: lower bound exceeds upper bound");
    require(lower[i] < kInf && upper[i] > -kInf, "box: empty coordinate range");
  }
  return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::cube(Eigen::Index dim, double lower, double upper) {
  return box(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require(center.size() > 0, "ball: empty center");
  require(all_finite(center), "ball: non-finite center");
  require(std::isfinite(radius) && radius > 0.0, "ball: radius must be finite and positive");
  return FeasibleSet(Ball{std::move(center), radius});
}

std::optional<Eigen::Index> FeasibleSet::dim() const {
  if (const auto* b = std::get_if<Box>(&kind_)) return b->lower.size();
  if (const auto* b = std::get_if<Ball>(&kind_)) return b->center.size();
  return std::nullopt;
}

bool FeasibleSet::contains(const Vector& x, double slack) const {
  if (!all_finite(x)) return false;
  if (const auto* b = std::get_if<Box>(&kind_)) {
    if (x.size() != b->lower.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < b->lower[i] - slack || x[i] > b->upper[i] + slack) return false;
    }
    return true;
  }
  if (const auto* b = std::get_if<Ball>(&kind_)) {
    if (x.size() != b->center.size()) return false;
    return (x - b->center).norm() <= b->radius + slack;
  }
  return true;
}

Vector FeasibleSet::euclidean_projection(const Vector& x) const {
  if (const auto* b = std::get_if<Box>(&kind_)) {
    require(x.size() == b->lower.size(), "euclidean_projection: dimension mismatch");
    return x.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  if (const auto* b = std::get_if<Ball>(&kind_)) {
    require(x.size() == b->center.size(), "euclidean_projection: dimension mismatch");
    const Vector offset = x - b->center;
    const double norm = offset.norm();
    if (norm <= b->radius) return x;
    return b->center + offset * (b->radius / norm);
  }
  return x;
}

double linf_diameter(const FeasibleSet& set) {
  if (const auto* b = std::get_if<Box>(&set.kind())) return (b->upper - b->lower).maxCoeff();
  if (const auto* b = std::get_if<Ball>(&set.kind())) return 2.0 * b->radius;
  return kInf;
}

double l2_diameter(const FeasibleSet& set) {
  if (const auto* b = std::get_if<Box>(&set.kind())) {
    const Vector width = b->upper - b->lower;
    if (!width.allFinite()) return kInf;
    return width.norm();
  }
  if (const auto* b = std::get_if<Ball>(&set.kind())) return 2.0 * b->radius;
  return kInf;
}

namespace {

Vector project_ball(const Vector& g, const Vector& anchor, const Vector& d, const Ball& ball,
                    const ProjectionOptions& options) {
  const Vector shifted = d.cwiseProduct(anchor - ball.center) - g;
  // x(mu) - c = (D + mu I)^{-1} (D (anchor - c) - g)
  auto offset_at = [&](double mu) -> Vector {
    return shifted.cwiseQuotient((d.array() + mu).matrix());
  };

  Vector offset = offset_at(0.0);
  if (offset.norm() <= ball.radius) return ball.center + offset;

  // ||x(mu) - c|| <= ||shifted|| / (min D + mu) <= r once mu >= ||shifted|| / r.
  double lo = 0.0;
  double hi = shifted.norm() / ball.radius;
  Vector best = offset_at(hi);
  const double target_gap = options.ball_tolerance * ball.radius;
  for (int it = 0; it < options.ball_max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Vector candidate = offset_at(mid);
    const double norm = candidate.norm();
    if (norm > ball.radius) {
      lo = mid;
    } else {
      hi = mid;
      best = candidate;
      if (ball.radius - norm <= target_gap) break;
    }
  }
  // Always hand back the feasible side of the bracket.
  return ball.center + best;
}

}  // namespace

Vector project_weighted(const Vector& g, const Vector& anchor, const DiagonalScaling& scaling,
                        const FeasibleSet& set, const ProjectionOptions& options) {
  require(g.size() == anchor.size(), "project_weighted: gradient and anchor dimensions differ");
  require(scaling.dim() == anchor.size(), "project_weighted: scaling dimension mismatch");
  require(all_finite(g), "project_weighted: non-finite gradient");
  require(all_finite(anchor), "project_weighted: non-finite anchor");
  const Vector& d = scaling.diag();

  return std::visit(
      [&](const auto& kind) -> Vector {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Unconstrained>) {
          return anchor - g.cwiseQuotient(d);
        } else if constexpr (std::is_same_v<T, Box>) {
          require(kind.lower.size() == anchor.size(), "project_weighted: box dimension mismatch");
          for (Eigen::Index i = 0; i < anchor.size(); ++i) {
            const double lo = kind.lower[i] - anchor_slack(kind.lower[i]);
            const double hi = kind.upper[i] + anchor_slack(kind.upper[i]);
            require(anchor[i] >= lo && anchor[i] <= hi, "project_weighted: anchor outside box");
          }
          return (anchor - g.cwiseQuotient(d)).cwiseMax(kind.lower).cwiseMin(kind.upper);
        } else {
          require(kind.center.size() == anchor.size(), "project_weighted: ball dimension mismatch");
          require((anchor - kind.center).norm() <= kind.radius + anchor_slack(kind.radius),
                  "project_weighted: anchor outside ball");
          return project_ball(g, anchor, d, kind, options);
        }
      },
      set.kind());
}

}  // namespace adaprox
