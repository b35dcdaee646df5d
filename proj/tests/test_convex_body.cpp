#include "reeb/convex_body.hpp"
#include "reeb/errors.hpp"
#include "reeb/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace reeb;

namespace {

Vector random_vector(int dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vector v(dim);
  for (auto& x : v) x = g(rng);
  return v;
}

ConvexBody sample_body() { return ConvexBody::perturbed({1.0, 2.0, 2.5}, 0.05, {1.0, 0.5, 2.0}, 1.5); }

}  // namespace

TEST_CASE("ellipsoid H2 is the quadratic form") {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0});
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vector z = random_vector(4, rng);
    const double q = std::numbers::pi * ((z(0) * z(0) + z(1) * z(1)) + (z(2) * z(2) + z(3) * z(3)) / 2.0);
    CHECK(body.h2(z) == doctest::Approx(q).epsilon(1e-14));
  }
  CHECK(body.is_ellipsoid());
  CHECK(body.plane_orbit_period(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(body.plane_orbit_period(1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("derivatives match finite differences") {
  const auto body = sample_body();
  std::mt19937_64 rng(2);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Vector z = random_vector(6, rng, 0.4);
    Vector fd(6);
    Matrix fdh(6, 6);
    for (int i = 0; i < 6; ++i) {
      Vector e = Vector::Zero(6);
      e(i) = h;
      fd(i) = (body.h(z + e) - body.h(z - e)) / (2 * h);
      fdh.col(i) = (body.grad_h2(z + e) - body.grad_h2(z - e)) / (2 * h);
    }
    CHECK((body.grad_h(z) - fd).norm() < 1e-7 * (1 + fd.norm()));
    CHECK((body.hess_h2(z) - fdh).norm() < 1e-6 * (1 + fdh.norm()));
  }
}

TEST_CASE("Euler identity and homogeneity") {
  const auto body = sample_body();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Vector z = random_vector(6, rng);
    CHECK(body.grad_h(z).dot(z) == doctest::Approx(body.alpha() * body.h(z)).epsilon(1e-12));
    CHECK(body.grad_h2(z).dot(z) == doctest::Approx(2 * body.h2(z)).epsilon(1e-12));
    CHECK(homogeneity_defect(body, z, 0.3) < 1e-13);
    CHECK(homogeneity_defect(body, z, 4.0) < 1e-13);
  }
}

TEST_CASE("projection lands on the level set F = 1") {
  const auto body = sample_body();
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Vector p = body.project(random_vector(6, rng));
    CHECK(body.base(p) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(body.h2(p) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("plane orbit period of the perturbed body") {
  const auto body = ConvexBody::perturbed({1.0, 2.0}, 1e-3, {1.0, 1.0});
  const double kappa = (std::numbers::pi + std::sqrt(std::numbers::pi * std::numbers::pi + 4e-3)) / 2;
  CHECK(body.plane_orbit_period(0) == doctest::Approx(std::numbers::pi / kappa).epsilon(1e-14));
}

TEST_CASE("Legendre dual: Fenchel-Young and inverse gradients") {
  for (const auto& body : {ConvexBody::ellipsoid({1.0, 3.0}, 1.3), sample_body()}) {
    const DualEvaluator dual(body);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 30; ++k) {
      const Vector z = random_vector(body.dim(), rng);
      const Vector w = body.grad_h(z);
      CHECK(body.h(z) + dual.value(w) == doctest::Approx(z.dot(w)).epsilon(1e-10));
      CHECK((dual.gradient(w) - z).norm() < 1e-9 * z.norm());
      const Vector other = random_vector(body.dim(), rng);
      CHECK(body.h(other) + dual.value(w) >= other.dot(w) - 1e-12);
    }
  }
}

TEST_CASE("dual gradient matches finite differences") {
  const auto body = sample_body();
  const DualEvaluator dual(body);
  std::mt19937_64 rng(6);
  const double h = 1e-6;
  for (int k = 0; k < 10; ++k) {
    const Vector w = random_vector(6, rng);
    Vector g;
    const double v = dual.value_and_gradient(w, g);
    CHECK(v == doctest::Approx(dual.value(w)).epsilon(1e-14));
    Vector fd(6);
    for (int i = 0; i < 6; ++i) {
      Vector e = Vector::Zero(6);
      e(i) = h;
      fd(i) = (dual.value(w + e) - dual.value(w - e)) / (2 * h);
    }
    CHECK((g - fd).norm() < 1e-7 * (1 + g.norm()));
  }
}

TEST_CASE("support function of an ellipsoid") {
  const std::vector<double> a{1.0, 2.0, 4.0};
  const auto body = ConvexBody::ellipsoid(a);
  const DualEvaluator dual(body);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    const Vector w = random_vector(6, rng);
    double s = 0;
    for (int h = 0; h < 3; ++h) s += a[h] * (w(2 * h) * w(2 * h) + w(2 * h + 1) * w(2 * h + 1));
    const auto sp = dual.support_point(w);
    CHECK(sp.support == doctest::Approx(std::sqrt(s / std::numbers::pi)).epsilon(1e-13));
    CHECK(sp.point.dot(w) == doctest::Approx(sp.support).epsilon(1e-13));
    CHECK(body.h2(sp.point) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("pinching radii") {
  const auto e = ConvexBody::ellipsoid({1.0, 1.7, 3.0});
  const auto r = pinching_radii(e);
  CHECK(r.r == doctest::Approx(std::sqrt(1.0 / std::numbers::pi)).epsilon(1e-10));
  CHECK(r.R == doctest::Approx(std::sqrt(3.0 / std::numbers::pi)).epsilon(1e-10));
  CHECK_FALSE(r.flagged);
  CHECK(e.diameter() == doctest::Approx(2 * r.R).epsilon(1e-10));
  const auto b = pinching_radii(ConvexBody::ball(2, 0.7));
  CHECK(b.r == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(b.R == doctest::Approx(0.7).epsilon(1e-12));
  const auto p = pinching_radii(sample_body());
  CHECK(p.r < p.R);
  CHECK(p.r <= std::sqrt(1.0 / std::numbers::pi));
}

TEST_CASE("strong convexity check") {
  const auto rep = validate_convexity(sample_body(), 1000);
  CHECK(rep.strongly_convex);
  CHECK(rep.min_eigenvalue > rep.threshold);
  CHECK(rep.samples == 1000);
}

TEST_CASE("invalid bodies are rejected") {
  CHECK_THROWS_AS(ConvexBody::ellipsoid({1.0, 0.0}), InputError);
  CHECK_THROWS_AS(ConvexBody::ellipsoid({1.0}, 2.0), InputError);
  CHECK_THROWS_AS(ConvexBody::perturbed({1.0, 2.0}, -0.1, {1.0, 1.0}), InputError);
  CHECK_THROWS_AS(ConvexBody::perturbed({1.0, 2.0}, 0.1, {1.0}), InputError);
  CHECK_THROWS_AS(ConvexBody::ellipsoid({1.0}).homogenize(1.0), InputError);
}

TEST_CASE("sphere samples are unit vectors") {
  const auto s = sobol_sphere_points(4, 256);
  REQUIRE(s.size() == 256);
  Vector mean = Vector::Zero(4);
  for (const auto& v : s) {
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    mean += v / 256.0;
  }
  CHECK(mean.norm() < 0.1);
  const auto r = random_sphere_points(6, 10, 42);
  CHECK(r.size() == 10);
  CHECK((random_sphere_points(6, 10, 42)[3] - r[3]).norm() == 0.0);
}
