#include "adaprox/problems.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace adaprox {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// max over the box of <c, v>, coordinate-wise.
double box_support(const Vector& c, const Box& box) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    total += std::max(c[i] * box.lower[i], c[i] * box.upper[i]);
  }
  return total;
}

}  // namespace

Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper,
                         const Vector& rhs) {
  const Eigen::Index n = diag.size();
  require(n > 0, "solve_tridiagonal: empty system");
  require(rhs.size() == n && lower.size() == n - 1 && upper.size() == n - 1,
          "solve_tridiagonal: inconsistent sizes");

  Vector c_prime(n);
  Vector d_prime(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c_prime[0] = n > 1 ? upper[0] / pivot : 0.0;
  d_prime[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i - 1] * c_prime[i - 1];
    if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c_prime[i] = i < n - 1 ? upper[i] / pivot : 0.0;
    d_prime[i] = (rhs[i] - lower[i - 1] * d_prime[i - 1]) / pivot;
  }

  Vector x(n);
  x[n - 1] = d_prime[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
  return x;
}

Objective nesterov_worst(int n) {
  require(n >= 2, "nesterov_worst: n must be at least 2");
  Objective obj;
  obj.dim = n;
  obj.value = [n](const Vector& x) {
    require(x.size() == n, "nesterov_worst: dimension mismatch");
    double s = x[0] * x[0] + x[n - 1] * x[n - 1];
    for (int i = 0; i + 1 < n; ++i) {
      const double diff = x[i] - x[i + 1];
      s += diff * diff;
    }
    return 0.5 * s - x[0];
  };
  obj.gradient = [n](const Vector& x) {
    require(x.size() == n, "nesterov_worst: dimension mismatch");
    // A x - e_1 with A = tridiag(-1, 2, -1).
    Vector g = 2.0 * x;
    g.head(n - 1) -= x.tail(n - 1);
    g.tail(n - 1) -= x.head(n - 1);
    g[0] -= 1.0;
    return g;
  };

  Vector rhs = Vector::Zero(n);
  rhs[0] = 1.0;
  const Vector minimizer = solve_tridiagonal(Vector::Constant(n - 1, -1.0), Vector::Constant(n, 2.0),
                                             Vector::Constant(n - 1, -1.0), rhs);
  obj.f_star = obj.value(minimizer);
  obj.minimizer = minimizer;
  // ||A||_2 < 4.
  obj.smoothness = Vector::Constant(n, 4.0);
  return obj;
}

Objective diag_quadratic(const Vector& beta, const Vector& x_star) {
  require(beta.size() > 0, "diag_quadratic: empty beta");
  require(beta.size() == x_star.size(), "diag_quadratic: beta and x_star dimensions differ");
  require(beta.allFinite() && x_star.allFinite(), "diag_quadratic: non-finite input");
  require(beta.minCoeff() >= 1.0, "diag_quadratic: beta entries must be >= 1");
  Objective obj;
  obj.dim = beta.size();
  obj.value = [beta, x_star](const Vector& x) {
    require(x.size() == beta.size(), "diag_quadratic: dimension mismatch");
    return 0.5 * (beta.array() * (x - x_star).array().square()).sum();
  };
  obj.gradient = [beta, x_star](const Vector& x) -> Vector {
    require(x.size() == beta.size(), "diag_quadratic: dimension mismatch");
    return beta.cwiseProduct(x - x_star);
  };
  obj.f_star = 0.0;
  obj.minimizer = x_star;
  obj.smoothness = beta;
  return obj;
}

BilinearGame bilinear_game(const Matrix& payoff, const FeasibleSet& x_box, const FeasibleSet& y_box) {
  const auto* xb = std::get_if<Box>(&x_box.kind());
  const auto* yb = std::get_if<Box>(&y_box.kind());
  require(xb != nullptr && yb != nullptr, "bilinear_game: domains must be boxes");
  require(xb->lower.allFinite() && xb->upper.allFinite() && yb->lower.allFinite() &&
              yb->upper.allFinite(),
          "bilinear_game: boxes must be bounded");
  require(payoff.rows() == xb->lower.size() && payoff.cols() == yb->lower.size(),
          "bilinear_game: payoff shape does not match the boxes");

  const Eigen::Index n = payoff.rows();
  const Eigen::Index m = payoff.cols();
  BilinearGame game;
  game.payoff = payoff;
  game.x_domain = x_box;
  game.y_domain = y_box;

  Vector lower(n + m);
  Vector upper(n + m);
  lower << xb->lower, yb->lower;
  upper << xb->upper, yb->upper;
  game.domain = FeasibleSet::box(lower, upper);

  game.op.dim = n + m;
  game.op.apply = [payoff, n, m](const Vector& z) -> Vector {
    require(z.size() == n + m, "bilinear_game: dimension mismatch");
    Vector out(n + m);
    out.head(n) = payoff * z.tail(m);
    out.tail(m) = -payoff.transpose() * z.head(n);
    return out;
  };
  const Box xbox = *xb;
  const Box ybox = *yb;
  game.op.gap = [payoff, n, m, xbox, ybox](const Vector& z) {
    require(z.size() == n + m, "bilinear_game: dimension mismatch");
    // max_{y'} x^T A y' - min_{x'} x'^T A y
    const Vector row = payoff.transpose() * z.head(n);
    const Vector col = payoff * z.tail(m);
    return box_support(row, ybox) + box_support(-col, xbox);
  };
  // The operator matrix [[0, A], [-A^T, 0]] has spectral norm ||A||_2.
  const double norm =
      payoff.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(payoff).singularValues()(0);
  game.op.smoothness = Vector::Constant(n + m, std::max(1.0, norm));
  return game;
}

MonotoneOp gradient_operator(const Objective& objective) {
  MonotoneOp op;
  op.dim = objective.dim;
  op.apply = objective.gradient;
  op.smoothness = objective.smoothness;
  return op;
}

StochasticOracle::StochasticOracle(GradientFn base, Eigen::Index dim, double sigma,
                                   std::uint64_t seed)
    : base_(std::move(base)), dim_(dim), sigma_(sigma), seed_(seed) {
  require(static_cast<bool>(base_), "StochasticOracle: empty base oracle");
  require(dim_ > 0, "StochasticOracle: dimension must be positive");
  require(std::isfinite(sigma_) && sigma_ >= 0.0, "StochasticOracle: sigma must be >= 0");
}

Vector StochasticOracle::noise(std::uint64_t counter) const {
  if (sigma_ == 0.0) return Vector::Zero(dim_);
  std::mt19937_64 engine(splitmix64(seed_ ^ splitmix64(counter)));
  std::normal_distribution<double> normal(0.0, sigma_ / std::sqrt(static_cast<double>(dim_)));
  Vector out(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) out[i] = normal(engine);
  return out;
}

Vector StochasticOracle::draw(const Vector& x) {
  Vector g = base_(x);
  if (sigma_ > 0.0) g += noise(counter_);
  ++counter_;
  return g;
}

StochasticOracle stochastic_wrap(const Objective& base, double sigma, std::uint64_t seed) {
  return StochasticOracle(base.gradient, base.dim, sigma, seed);
}

StochasticOracle stochastic_wrap(const MonotoneOp& base, double sigma, std::uint64_t seed) {
  return StochasticOracle(base.apply, base.dim, sigma, seed);
}

Vector draw_gradient(StochasticOracle& oracle, const Vector& x) { return oracle.draw(x); }

}  // namespace adaprox
