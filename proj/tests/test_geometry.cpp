#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adaprox/geometry.hpp"

using namespace adaprox;

namespace {

double prox_objective(const Vector& x, const Vector& g, const Vector& anchor, const Vector& d) {
  return g.dot(x) + 0.5 * ((x - anchor).array().square() * d.array()).sum();
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scaling starts at identity and grows by the movement recurrence") {
  DiagonalScaling d(3);
  CHECK(d.diag() == Vector::Ones(3));
  CHECK(d.trace() == 3.0);
  d.grow_by_movement(Vector{{1.0, 0.0, 4.0}}, 4.0);
  CHECK(d[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK(d[1] == 1.0);
  CHECK(d[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("scalar scaling uses the summed movement on every coordinate") {
  DiagonalScaling d(3, ScalingMode::kScalar);
  d.grow_by_movement(Vector{{1.0, 0.0, 3.0}}, 4.0);
  CHECK(d[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d[1] == d[0]);
  CHECK(d[2] == d[0]);
  d.add_squares(Vector{{1.0, 1.0, 0.0}});
  CHECK(d[1] == doctest::Approx(2.0));
}

TEST_CASE("from_values rejects entries below one and unequal scalar entries") {
  CHECK_THROWS_AS(DiagonalScaling::from_values(Vector{{1.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalScaling::from_values(Vector{{1.0, 2.0}}, ScalingMode::kScalar), std::invalid_argument);
  CHECK_THROWS_AS(DiagonalScaling::from_values(Vector{{1.0, NAN}}), std::invalid_argument);
  CHECK(DiagonalScaling::from_values(Vector{{2.0, 3.0}}).trace() == 5.0);
}

TEST_CASE("feasible set construction, membership and diameters") {
  const auto cube = FeasibleSet::cube(3, -2.0, 2.0);
  CHECK(cube.dim() == 3);
  CHECK(cube.contains(Vector{{2.0, -2.0, 0.0}}));
  CHECK_FALSE(cube.contains(Vector{{2.1, 0.0, 0.0}}));
  CHECK(cube.contains(Vector{{2.1, 0.0, 0.0}}, 0.2));
  CHECK(linf_diameter(cube) == 4.0);
  CHECK(l2_diameter(cube) == doctest::Approx(4.0 * std::sqrt(3.0)));

  const auto ball = FeasibleSet::ball(Vector{{1.0, 1.0}}, 2.0);
  CHECK(linf_diameter(ball) == 4.0);
  CHECK(l2_diameter(ball) == 4.0);
  CHECK(ball.contains(Vector{{3.0, 1.0}}));
  CHECK_FALSE(ball.contains(Vector{{3.0, 1.1}}));

  const auto free = FeasibleSet::unconstrained();
  CHECK(free.is_unconstrained());
  CHECK_FALSE(free.dim().has_value());
  CHECK(std::isinf(linf_diameter(free)));

  CHECK_THROWS_AS(FeasibleSet::box(Vector{{1.0}}, Vector{{0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet::ball(Vector{{0.0}}, -1.0), std::invalid_argument);
}

TEST_CASE("unconstrained weighted projection is the closed form step") {
  const Vector g{{1.0, -4.0}};
  const Vector a{{0.5, 0.5}};
  const auto d = DiagonalScaling::from_values(Vector{{2.0, 4.0}});
  const Vector x = project_weighted(g, a, d, FeasibleSet::unconstrained());
  CHECK(x[0] == 0.0);
  CHECK(x[1] == 1.5);
}

TEST_CASE("box projection satisfies KKT and beats sampled feasible points") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 6;
    const Vector lower = random_vector(rng, n, -3.0, -0.5);
    const Vector upper = random_vector(rng, n, 0.5, 3.0);
    const auto set = FeasibleSet::box(lower, upper);
    const Vector anchor = random_vector(rng, n, -0.5, 0.5);
    const Vector g = random_vector(rng, n, -10.0, 10.0);
    const Vector dv = random_vector(rng, n, 1.0, 5.0);
    const auto d = DiagonalScaling::from_values(dv);
    const Vector x = project_weighted(g, anchor, d, set);
    REQUIRE(set.contains(x));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double grad = g[i] + dv[i] * (x[i] - anchor[i]);
      if (x[i] > lower[i] && x[i] < upper[i]) {
        CHECK(std::abs(grad) <= 1e-12 * (1 + std::abs(g[i])));
      } else if (x[i] == lower[i]) {
        CHECK(grad >= -1e-12);
      } else {
        CHECK(grad <= 1e-12);
      }
    }
    const double best = prox_objective(x, g, anchor, dv);
    for (int k = 0; k < 50; ++k) {
      Vector sample(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        sample[i] = std::uniform_real_distribution<double>(lower[i], upper[i])(rng);
      }
      CHECK(best <= prox_objective(sample, g, anchor, dv) + 1e-12);
    }
  }
}

TEST_CASE("ball projection stays feasible and satisfies the multiplier conditions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const Vector c = random_vector(rng, n, -1.0, 1.0);
    const double r = 0.5 + trial % 3;
    const auto set = FeasibleSet::ball(c, r);
    Vector anchor = c + random_vector(rng, n, -1.0, 1.0) * (0.5 * r / std::sqrt(static_cast<double>(n)));
    const Vector g = random_vector(rng, n, -20.0, 20.0);
    const Vector dv = random_vector(rng, n, 1.0, 8.0);
    const auto d = DiagonalScaling::from_values(dv);
    const Vector x = project_weighted(g, anchor, d, set);
    REQUIRE((x - c).norm() <= r * (1 + 1e-12));

    const Vector free = anchor - g.cwiseQuotient(dv);
    if ((free - c).norm() <= r) {
      CHECK((x - free).norm() <= 1e-12 * (1 + free.norm()));
      continue;
    }
    CHECK((x - c).norm() == doctest::Approx(r).epsilon(1e-10));
    // g + D (x - a) = -mu (x - c) with mu >= 0.
    const Vector residual = g + dv.cwiseProduct(x - anchor);
    const Vector normal = x - c;
    const double mu = -residual.dot(normal) / normal.squaredNorm();
    CHECK(mu >= -1e-9);
    CHECK((residual + mu * normal).norm() <= 1e-6 * (1 + residual.norm()));

    const double best = prox_objective(x, g, anchor, dv);
    for (int k = 0; k < 50; ++k) {
      Vector dir = random_vector(rng, n, -1.0, 1.0);
      const double scale = std::uniform_real_distribution<double>(0.0, r)(rng) / std::max(dir.norm(), 1e-12);
      CHECK(best <= prox_objective(c + scale * dir, g, anchor, dv) + 1e-9);
    }
  }
}

TEST_CASE("ball projection with identity scaling is the Euclidean projection of the step") {
  const auto set = FeasibleSet::ball(Vector::Zero(2), 1.0);
  const Vector x = project_weighted(Vector{{-3.0, -4.0}}, Vector::Zero(2), DiagonalScaling(2), set);
  CHECK(x[0] == doctest::Approx(0.6));
  CHECK(x[1] == doctest::Approx(0.8));
  CHECK((set.euclidean_projection(Vector{{3.0, 4.0}}) - x).norm() <= 1e-12);
}

TEST_CASE("projection rejects bad input") {
  const auto box = FeasibleSet::cube(2, -1.0, 1.0);
  const DiagonalScaling d(2);
  CHECK_THROWS_AS(project_weighted(Vector::Zero(3), Vector::Zero(2), d, box), std::invalid_argument);
  CHECK_THROWS_AS(project_weighted(Vector{{NAN, 0.0}}, Vector::Zero(2), d, box), std::invalid_argument);
  CHECK_THROWS_AS(project_weighted(Vector::Zero(2), Vector{{5.0, 0.0}}, d, box), std::invalid_argument);
  CHECK_THROWS_AS(project_weighted(Vector::Zero(2), Vector{{5.0, 0.0}}, d, FeasibleSet::ball(Vector::Zero(2), 1.0)),
                  std::invalid_argument);
}

TEST_CASE("euclidean projection clamps boxes and scales onto balls") {
  const auto box = FeasibleSet::box(Vector{{0.0, -1.0}}, Vector{{1.0, 1.0}});
  const Vector p = box.euclidean_projection(Vector{{2.0, -3.0}});
  CHECK(p == Vector{{1.0, -1.0}});
  const auto free = FeasibleSet::unconstrained();
  CHECK(free.euclidean_projection(Vector{{5.0}}) == Vector{{5.0}});
}
