#include "reeb/clarke_dual.hpp"
#include "reeb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace reeb;

namespace {

FourierLoop random_loop(int dim, int modes, std::mt19937_64& rng) {
  FourierLoop u(dim, modes);
  std::normal_distribution<double> g;
  for (int k = 1; k <= modes; ++k) {
    const double decay = 1.0 / (k * k);
    for (int i = 0; i < dim; ++i) {
      u.a(k)(i) = decay * g(rng);
      u.b(k)(i) = decay * g(rng);
    }
  }
  return u;
}

Vector axis(int dim, int i) {
  Vector z = Vector::Zero(dim);
  z(i) = 1.0;
  return z;
}

double action_at_critical_scaling(const ClarkeFunctional& f, FourierLoop u) {
  u.coefficients() *= f.critical_scaling(u);
  return renormalized_action(f.value(u), f.body().alpha());
}

}  // namespace

TEST_CASE("Fourier loop calculus") {
  std::mt19937_64 rng(1);
  const auto u = random_loop(4, 5, rng);
  const double h = 1e-6;
  for (double t : {0.1, 0.45, 0.8}) {
    CHECK(((u.primitive(t + h) - u.primitive(t - h)) / (2 * h) - u.value(t)).norm() < 1e-8);
    CHECK(((u.value(t + h) - u.value(t - h)) / (2 * h) - u.derivative(t)).norm() < 1e-6);
    CHECK((u.time_shifted(0.3).value(t) - u.value(t + 0.3)).norm() < 1e-13);
    CHECK((u.iterate(3).value(t) - u.value(3 * t)).norm() < 1e-13);
  }
  const auto c = u.complex_coefficient(2);
  CHECK(c[1].real() == doctest::Approx(u.a(2)(1) / 2));
  CHECK(c[1].imag() == doctest::Approx(-u.b(2)(1) / 2));
  CHECK(u.with_modes(8).value(0.3).isApprox(u.value(0.3)));
}

TEST_CASE("gradient matches finite differences at 50 random loops") {
  const auto body = ConvexBody::perturbed({1.0, 2.0}, 1e-2, {1.0, 0.5});
  const ClarkeFunctional f(body, 6);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> pick(0, f.num_parameters() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = random_loop(4, 6, rng);
    Vector grad;
    f.evaluate(u.coefficients(), &grad);
    double worst = 0.0;
    for (int probe = 0; probe < 6; ++probe) {
      const int i = pick(rng);
      const double h = 1e-6 * std::max(1.0, std::abs(u.coefficients()(i)));
      Vector p = u.coefficients(), m = u.coefficients();
      p(i) += h;
      m(i) -= h;
      const double fd = (f.evaluate(p, nullptr) - f.evaluate(m, nullptr)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad(i)) / std::max(1.0, std::abs(grad(i))));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("Psi is invariant under time shifts") {
  const auto body = ConvexBody::ellipsoid({1.0, 1.5});
  const ClarkeFunctional f(body, 8, 4);
  std::mt19937_64 rng(3);
  const auto u = random_loop(4, 8, rng);
  const double v = f.value(u);
  CHECK(f.value(u.time_shifted(5.0 / f.grid())) == doctest::Approx(v).epsilon(1e-13));
  CHECK(f.value(u.time_shifted(0.123)) == doctest::Approx(v).epsilon(1e-6));
}

TEST_CASE("plane circles are critical with action a_h") {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0, 3.5});
  const ClarkeFunctional f(body, 8);
  for (int h = 0; h < 3; ++h) {
    const auto u = FourierLoop::circle(axis(6, 2 * h), 8);
    CHECK(action_at_critical_scaling(f, u) == doctest::Approx(body.a()[h]).epsilon(1e-12));
    CHECK(action_at_critical_scaling(f, u.iterate(2)) == doctest::Approx(2 * body.a()[h]).epsilon(1e-12));
    FourierLoop s = u;
    s.coefficients() *= f.critical_scaling(u);
    Vector grad;
    f.evaluate(s.coefficients(), &grad);
    CHECK(grad.norm() < 1e-12);
  }
}

TEST_CASE("renormalized action is independent of alpha on critical loops") {
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto body = ConvexBody::ellipsoid({1.0, 2.0}, alpha);
    const ClarkeFunctional f(body, 8);
    CHECK(action_at_critical_scaling(f, FourierLoop::circle(axis(4, 2), 8)) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("argument validation") {
  const auto body = ConvexBody::ellipsoid({1.0, 2.0});
  CHECK_THROWS_AS(ClarkeFunctional(body, 8, 4, 16), InputError);
  CHECK_THROWS_AS(renormalized_action(0.1, 1.5), InputError);
  CHECK_THROWS_AS(FourierLoop(3, 2), InputError);
  CHECK_THROWS_AS(FourierLoop::circle(axis(4, 0), 4, 5), InputError);
  ClarkeConfig cfg;
  cfg.modes = 4;
  CHECK_THROWS_AS(minimize(body, cfg), InputError);
}

TEST_CASE("minimize recovers the systole") {
  ClarkeConfig cfg;
  cfg.modes = 16;
  cfg.random_starts = 4;
  const auto r = minimize(ConvexBody::ellipsoid({1.0, 2.0}), cfg);
  CHECK(r.systole == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.gradient_norm < 1e-8);
  CHECK(r.hamiltonian_residual < 1e-6);
  CHECK(r.orbit.residual < 1e-6);
  CHECK(std::abs(r.doubling_delta) < 1e-8);
  const auto b = minimize(ConvexBody::ball(2, 0.7), cfg);
  CHECK(b.systole == doctest::Approx(std::numbers::pi * 0.49).epsilon(1e-8));
}

TEST_CASE("serial and parallel minimization agree") {
  ClarkeConfig cfg;
  cfg.modes = 8;
  cfg.random_starts = 3;
  cfg.doubling_check = false;
  const auto body = ConvexBody::perturbed({1.0, 2.0}, 1e-3, {1.0, 1.0});
  const auto p = minimize(body, cfg);
  cfg.execution = Execution::serial;
  const auto s = minimize(body, cfg);
  CHECK(p.systole == doctest::Approx(s.systole).epsilon(1e-12));
  CHECK(p.systole == doctest::Approx(body.plane_orbit_period(0)).epsilon(1e-9));
}
