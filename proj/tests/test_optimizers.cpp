#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "adaprox/optimizers.hpp"

using namespace adaprox;

namespace {

using Vec = std::vector<double>;

// argmin over [lo, hi]^d of <g, u> + 1/2 sum d_i (u_i - a_i)^2, coordinate by coordinate.
Vec clamp_step(const Vec& g, const Vec& a, const Vec& d, double lo, double hi) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::clamp(a[i] - g[i] / d[i], lo, hi);
  return out;
}

Vec to_vec(const Vector& v) { return Vec(v.data(), v.data() + v.size()); }
Vector to_vector(const Vec& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

double max_diff(const Vector& a, const Vec& b) { return (a - to_vector(b)).lpNorm<Eigen::Infinity>(); }

const Vector kBeta{{1.0, 4.0, 16.0, 2.0}};
const Vector kCenter{{0.7, -1.5, 3.0, 0.0}};

Vec quad_grad(const Vec& x) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = kBeta[i] * (x[i] - kCenter[i]);
  return g;
}

OptimizerConfig config(double radius) {
  OptimizerConfig cfg;
  cfg.radius = radius;
  cfg.iterations = 100;
  return cfg;
}

}  // namespace

TEST_CASE("step size schedules") {
  CHECK(StepSizeSchedule::standard(0) == 1.0);
  CHECK(StepSizeSchedule::standard(3) == 2.0);
  CHECK(StepSizeSchedule(ScheduleKind::kStandard).next(5, 123.0) == doctest::Approx(3.0));
  const double golden = (1 + std::sqrt(5.0)) / 2;
  CHECK(StepSizeSchedule::optimized_next(1.0) == doctest::Approx(golden));
  // gamma_{t+1}^2 - gamma_{t+1} = gamma_t^2.
  double g = 1.0;
  for (int t = 0; t < 30; ++t) {
    const double n = StepSizeSchedule(ScheduleKind::kOptimized).next(t, g);
    CHECK(n * n - n == doctest::Approx(g * g));
    g = n;
  }
}

TEST_CASE("adagrad+ first step by hand") {
  const auto box = FeasibleSet::cube(2, -1.0, 1.0);
  const OptimizerConfig cfg = config(2.0);
  auto s = adagrad_plus_init(Vector::Zero(2), box, cfg);
  adagrad_plus_step(s, Vector{{0.5, -3.0}}, box, cfg);
  CHECK(s.x == Vector{{-0.5, 1.0}});
  CHECK(s.scaling[0] == doctest::Approx(std::sqrt(1.0 + 0.25 / 4.0)));
  CHECK(s.scaling[1] == doctest::Approx(std::sqrt(1.0 + 1.0 / 4.0)));
  CHECK(adagrad_plus_solution(s) == s.x);
  adagrad_plus_step(s, Vector{{0.0, 0.0}}, box, cfg);
  CHECK(adagrad_plus_solution(s) == Vector{{-0.5, 1.0}});
  CHECK(s.last.movement == 0.0);
}

TEST_CASE("adagrad+ matches a reference implementation") {
  const double lo = -2.0, hi = 2.0, r = hi - lo;
  const auto box = FeasibleSet::cube(4, lo, hi);
  const OptimizerConfig cfg = config(r);
  auto s = adagrad_plus_init(Vector::Zero(4), box, cfg);
  Vec x(4, 0.0), d(4, 1.0), sum(4, 0.0);
  for (int t = 0; t < 60; ++t) {
    const Vec g = quad_grad(x);
    const Vec next = clamp_step(g, x, d, lo, hi);
    for (std::size_t i = 0; i < 4; ++i) {
      d[i] = std::sqrt(d[i] * d[i] * (1 + (next[i] - x[i]) * (next[i] - x[i]) / (r * r)));
      sum[i] += next[i];
    }
    x = next;
    adagrad_plus_step(s, kBeta.cwiseProduct(s.x - kCenter), box, cfg);
    REQUIRE(max_diff(s.x, x) <= 1e-13);
    REQUIRE(max_diff(s.scaling.diag(), d) <= 1e-13);
    Vec avg(4);
    for (std::size_t i = 0; i < 4; ++i) avg[i] = sum[i] / (t + 1);
    REQUIRE(max_diff(adagrad_plus_solution(s), avg) <= 1e-13);
  }
}

TEST_CASE("adaacsa matches a reference implementation") {
  const double lo = -3.0, hi = 3.0, r = hi - lo;
  const auto box = FeasibleSet::cube(4, lo, hi);
  const Objective f = diag_quadratic(kBeta, kCenter);
  for (auto kind : {ScheduleKind::kStandard, ScheduleKind::kOptimized}) {
    OptimizerConfig cfg = config(r);
    cfg.schedule = kind;
    const Vec z0{1.0, 1.0, -1.0, 0.5};
    auto s = adaacsa_init(to_vector(z0), box, cfg);
    Vec y = z0, z = z0, d(4, 1.0);
    double alpha = 1.0;
    for (int t = 0; t < 60; ++t) {
      Vec x(4);
      for (std::size_t i = 0; i < 4; ++i) x[i] = (1 - 1 / alpha) * y[i] + z[i] / alpha;
      Vec g = quad_grad(x);
      for (auto& v : g) v *= alpha;  // gamma_t = alpha_t
      const Vec zn = clamp_step(g, z, d, lo, hi);
      for (std::size_t i = 0; i < 4; ++i) {
        y[i] = (1 - 1 / alpha) * y[i] + zn[i] / alpha;
        d[i] = std::sqrt(d[i] * d[i] * (1 + (zn[i] - z[i]) * (zn[i] - z[i]) / (r * r)));
      }
      z = zn;
      alpha = kind == ScheduleKind::kStandard ? 1 + (t + 1) / 3.0 : 0.5 * (1 + std::sqrt(1 + 4 * alpha * alpha));

      adaacsa_step(s, f.gradient, box, cfg);
      REQUIRE(max_diff(s.x, x) <= 1e-12);
      REQUIRE(max_diff(s.y, y) <= 1e-12);
      REQUIRE(max_diff(s.z, z) <= 1e-12);
      REQUIRE(max_diff(s.scaling.diag(), d) <= 1e-12);
    }
  }
}

TEST_CASE("adaagd+ matches a reference dual averaging implementation") {
  const double lo = -2.5, hi = 2.5, r = hi - lo;
  const auto box = FeasibleSet::cube(4, lo, hi);
  const Objective f = diag_quadratic(kBeta, kCenter);
  const OptimizerConfig cfg = config(r);
  const Vec z0{0.0, 1.0, -2.0, 2.0};
  auto s = adaagd_plus_init(to_vector(z0), box, cfg);
  Vec y = z0, z = z0, d(4, 1.0), sum(4, 0.0);
  for (int t = 1; t <= 60; ++t) {
    const double a = t, big_prev = (t - 1) * t / 2.0, big = t * (t + 1) / 2.0;
    Vec x(4);
    for (std::size_t i = 0; i < 4; ++i) x[i] = big_prev / big * y[i] + a / big * z[i];
    const Vec g = quad_grad(x);
    for (std::size_t i = 0; i < 4; ++i) sum[i] += a * g[i];
    // z_t re-solved from scratch around z_0.
    const Vec zn = clamp_step(sum, z0, d, lo, hi);
    for (std::size_t i = 0; i < 4; ++i) {
      y[i] = big_prev / big * y[i] + a / big * zn[i];
      d[i] = std::sqrt(d[i] * d[i] * (1 + (zn[i] - z[i]) * (zn[i] - z[i]) / (r * r)));
    }
    z = zn;

    adaagd_plus_step(s, f.gradient, box, cfg);
    REQUIRE(max_diff(s.x, x) <= 1e-12);
    REQUIRE(max_diff(s.y, y) <= 1e-12);
    REQUIRE(max_diff(s.z, z) <= 1e-12);
    REQUIRE(max_diff(s.gradient_sum, sum) <= 1e-9);
    REQUIRE(max_diff(s.scaling.diag(), d) <= 1e-12);
  }
}

TEST_CASE("adamp matches a reference implementation") {
  Matrix a(2, 2);
  a << 0.8, -1.3, 2.1, 0.4;
  const auto game = bilinear_game(a, FeasibleSet::cube(2, -1, 1), FeasibleSet::cube(2, -1, 1));
  const double r = 2.0;
  const OptimizerConfig cfg = config(r);
  auto apply = [&](const Vec& p) {
    const Vector f = game.op.apply(to_vector(p));
    return to_vec(f);
  };
  Vec y{1.0, 1.0, 1.0, 1.0}, d(4, 1.0), sum(4, 0.0);
  auto s = adamp_init(to_vector(y), game.domain, cfg);
  for (int t = 1; t <= 60; ++t) {
    const Vec x = clamp_step(apply(y), y, d, -1.0, 1.0);
    const Vec yn = clamp_step(apply(x), y, d, -1.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      const double m = (x[i] - y[i]) * (x[i] - y[i]) + (x[i] - yn[i]) * (x[i] - yn[i]);
      d[i] = std::sqrt(d[i] * d[i] * (1 + m / (2 * r * r)));
      sum[i] += x[i];
    }
    y = yn;
    adamp_step(s, game.op.apply, game.domain, cfg);
    REQUIRE(max_diff(s.y, y) <= 1e-12);
    REQUIRE(max_diff(s.scaling.diag(), d) <= 1e-12);
    Vec avg(4);
    for (std::size_t i = 0; i < 4; ++i) avg[i] = sum[i] / t;
    REQUIRE(max_diff(adamp_solution(s), avg) <= 1e-12);
  }
}

TEST_CASE("adagrad unconstrained steps by hand in one dimension") {
  // f = 1/2 beta x^2, D_0^2 = 1 + g(x_0)^2, x_{t+1} = x_t - eta g_t / D_t.
  const double beta = 3.0, eta = 0.5;
  const Objective f = diag_quadratic(Vector{{beta}}, Vector::Zero(1));
  OptimizerConfig cfg = config(1.0);
  cfg.eta = eta;
  auto s = adagrad_unconstrained_init(Vector{{1.0}}, f.gradient, FeasibleSet::unconstrained(), cfg);
  double x = 1.0, d2 = 1.0 + beta * beta, xsum = 0.0;
  CHECK(s.scaling[0] == doctest::Approx(std::sqrt(d2)));
  for (int t = 1; t <= 10; ++t) {
    xsum += x;
    x -= eta * beta * x / std::sqrt(d2);
    d2 += beta * x * beta * x;
    adagrad_unconstrained_step(s, f.gradient, cfg);
    CHECK(s.x[0] == doctest::Approx(x).epsilon(1e-14));
    CHECK(s.scaling[0] == doctest::Approx(std::sqrt(d2)).epsilon(1e-14));
    CHECK(adagrad_unconstrained_solution(s)[0] == doctest::Approx(xsum / t).epsilon(1e-14));
  }
}

TEST_CASE("linear coupling matches a reference implementation") {
  const Objective f = diag_quadratic(kBeta, kCenter);
  OptimizerConfig cfg = config(1.0);
  cfg.eta = 3.0;
  Vec x{0.0, 0.0, 0.0, 0.0}, y = x, z = x, d(4, 1.0);
  double gamma = 1.0;
  auto s = linear_coupling_init(to_vector(x), FeasibleSet::unconstrained(), cfg);
  for (int t = 0; t < 40; ++t) {
    const Vec g = quad_grad(x);
    Vec dn(4);
    for (std::size_t i = 0; i < 4; ++i) dn[i] = std::sqrt(d[i] * d[i] + gamma * gamma / 9.0 * g[i] * g[i]);
    for (std::size_t i = 0; i < 4; ++i) {
      z[i] -= gamma * g[i] / dn[i];
      y[i] = x[i] - g[i] / d[i];
    }
    d = dn;
    gamma = 0.5 * (1 + std::sqrt(1 + 4 * gamma * gamma));
    for (std::size_t i = 0; i < 4; ++i) x[i] = (1 - 1 / gamma) * y[i] + z[i] / gamma;

    linear_coupling_acsa_step(s, f.gradient, cfg);
    REQUIRE(max_diff(s.x, x) <= 1e-12);
    REQUIRE(max_diff(s.y, y) <= 1e-12);
    REQUIRE(max_diff(s.z, z) <= 1e-12);
    REQUIRE(s.gamma == doctest::Approx(gamma));
  }
}

TEST_CASE("sgd momentum heavy ball by hand") {
  auto s = sgd_momentum_init(Vector{{1.0}});
  sgd_momentum_step(s, Vector{{2.0}}, 0.1, 0.9);
  CHECK(s.x[0] == doctest::Approx(0.8));
  sgd_momentum_step(s, Vector{{1.0}}, 0.1, 0.9);
  CHECK(s.velocity[0] == doctest::Approx(-0.28));
  CHECK(s.x[0] == doctest::Approx(0.52));
  sgd_momentum_step(s, Vector{{100.0}}, 0.1, 0.9, FeasibleSet::cube(1, 0.0, 1.0));
  CHECK(s.x[0] == 0.0);
}

TEST_CASE("scalar and per-coordinate variants coincide in one dimension") {
  const auto box = FeasibleSet::cube(1, -2.0, 2.0);
  const Objective f = diag_quadratic(Vector{{3.0}}, Vector{{0.5}});
  for (auto algo : {Algorithm::kAdaGradPlus, Algorithm::kAdaAcsa, Algorithm::kAdaAgdPlus}) {
    OptimizerConfig a = config(4.0), b = config(4.0);
    b.scaling_mode = ScalingMode::kScalar;
    auto pa = make_optimizer(algo, Vector{{1.5}}, box, a, f.gradient);
    auto pb = make_optimizer(algo, Vector{{1.5}}, box, b, f.gradient);
    for (int t = 0; t < 50; ++t) {
      pa->step(f.gradient);
      pb->step(f.gradient);
      REQUIRE(std::abs(pa->solution()[0] - pb->solution()[0]) <= 1e-15);
      REQUIRE(std::abs(pa->scaling()->diag()[0] - pb->scaling()->diag()[0]) <= 1e-15);
    }
  }
}

TEST_CASE("scalar adagrad+ scaling equals the product form over l2 movements") {
  const auto box = FeasibleSet::cube(3, -1.0, 1.0);
  const Objective f = diag_quadratic(Vector{{1.0, 5.0, 9.0}}, Vector{{0.9, -0.9, 0.2}});
  OptimizerConfig cfg = config(2.0 * std::sqrt(3.0));
  cfg.scaling_mode = ScalingMode::kScalar;
  auto s = adagrad_plus_init(Vector::Zero(3), box, cfg);
  double product = 1.0;
  for (int t = 0; t < 30; ++t) {
    const Vector before = s.x;
    adagrad_plus_step(s, f.gradient(s.x), box, cfg);
    product *= 1.0 + (s.x - before).squaredNorm() / (12.0);
    CHECK(s.scaling[0] == doctest::Approx(std::sqrt(product)).epsilon(1e-13));
    CHECK(s.scaling[1] == s.scaling[0]);
  }
}

TEST_CASE("eta scales the gradient in movement-driven methods") {
  const auto box = FeasibleSet::cube(2, -1.0, 1.0);
  OptimizerConfig doubled = config(2.0);
  doubled.eta = 4.0;
  const OptimizerConfig plain = config(2.0);
  auto a = adagrad_plus_init(Vector::Zero(2), box, doubled);
  auto b = adagrad_plus_init(Vector::Zero(2), box, plain);
  adagrad_plus_step(a, Vector{{0.1, -0.2}}, box, doubled);
  adagrad_plus_step(b, Vector{{0.2, -0.4}}, box, plain);
  CHECK(a.x == b.x);
}

TEST_CASE("stochastic constant doubles the movement denominator") {
  OptimizerConfig cfg = config(3.0);
  CHECK(cfg.denominator_sq() == 9.0);
  cfg.movement_denominator = MovementDenominator::kTwoR2;
  CHECK(cfg.denominator_sq() == 18.0);
}

TEST_CASE("movement-driven scaling grows by at most sqrt 2 per step and stays feasible") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 50.0);
  const double lo = -1.0, hi = 2.0;
  const auto box = FeasibleSet::cube(5, lo, hi);
  GradientFn noisy = [&](const Vector& x) {
    Vector g(x.size());
    for (auto& v : g) v = normal(rng);
    return g;
  };
  for (auto algo : {Algorithm::kAdaGradPlus, Algorithm::kAdaAcsa, Algorithm::kAdaAgdPlus, Algorithm::kAdaMp}) {
    auto opt = make_optimizer(algo, Vector::Zero(5), box, config(hi - lo), noisy);
    Vector prev = opt->scaling()->diag();
    for (int t = 0; t < 200; ++t) {
      opt->step(noisy);
      const Vector cur = opt->scaling()->diag();
      REQUIRE((cur.array() >= prev.array()).all());
      REQUIRE((cur.array() <= std::sqrt(2.0) * prev.array() * (1 + 1e-15)).all());
      for (const auto& p : opt->iterates()) REQUIRE(box.contains(p, 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("optimizers validate their inputs") {
  const auto box = FeasibleSet::cube(2, -1.0, 1.0);
  const Objective f = diag_quadratic(Vector{{1.0, 1.0}}, Vector::Zero(2));
  OptimizerConfig bad = config(-1.0);
  CHECK_THROWS_AS(adagrad_plus_init(Vector::Zero(2), box, bad), std::invalid_argument);
  CHECK_THROWS_AS(adagrad_plus_init(Vector{{3.0, 0.0}}, box, config(2.0)), std::invalid_argument);
  auto s = adagrad_plus_init(Vector::Zero(2), box, config(2.0));
  CHECK_THROWS_AS(adagrad_plus_step(s, Vector{{NAN, 0.0}}, box, config(2.0)), std::invalid_argument);
  CHECK_THROWS_AS(adagrad_unconstrained_init(Vector::Zero(2), f.gradient, box, config(1.0)), std::invalid_argument);
  OptimizerConfig mom = config(1.0);
  mom.momentum = 1.0;
  CHECK_THROWS_AS(mom.validate(), std::invalid_argument);
  CHECK(requires_constraints(Algorithm::kAdaAcsa));
  CHECK(requires_unconstrained(Algorithm::kLinearCoupling));
  CHECK_FALSE(requires_constraints(Algorithm::kSgdMomentum));
  CHECK(algorithm_name(Algorithm::kAdaAgdPlus) == "adaagd+");
  CHECK(make_optimizer(Algorithm::kSgdMomentum, Vector::Zero(2), FeasibleSet::unconstrained(), config(1.0), f.gradient)
            ->scaling() == nullptr);
}
