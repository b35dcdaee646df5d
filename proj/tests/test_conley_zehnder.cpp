#include "reeb/conley_zehnder.hpp"
#include "reeb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace reeb;

namespace {

// Closed form for t -> e^{2 pi a J t}, t in [0, 1].
int rotation_cz(double a) {
  const double r = std::round(a);
  if (std::abs(a - r) < 1e-12) return static_cast<int>(2 * r - 1);
  return static_cast<int>(2 * std::floor(a) + 1);
}

int rotation_morse(double a) { return a <= 0 ? 0 : 2 * (static_cast<int>(std::ceil(a - 1e-12)) - 1); }

SymplecticPath hyperbolic_path(double lambda) {
  auto eval = [lambda](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::exp(lambda * t);
    m(1, 1) = std::exp(-lambda * t);
    return m;
  };
  auto der = [lambda](double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = lambda * std::exp(lambda * t);
    m(1, 1) = -lambda * std::exp(-lambda * t);
    return m;
  };
  return SymplecticPath(2, eval, der, SymplecticPath::Kind::sampled);
}

}  // namespace

TEST_CASE("rotation paths in Sp(2) match the closed form") {
  for (double a : {0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 7.0 / 3.0, -0.4, -1.0, -2.5}) {
    std::vector<double> rates{a};
    const auto p = rotation_path(rates);
    CAPTURE(a);
    CHECK(cz_index(p) == rotation_cz(a));
  }
}

TEST_CASE("cz normalization and endpoint convention") {
  std::vector<double> one{1.0};
  CHECK(cz_index(rotation_path(one, 0.5)) == 1);
  const auto r = conley_zehnder(rotation_path(one));
  CHECK(r.index == 1);
  CHECK(r.degenerate);
  std::vector<double> half{0.5};
  CHECK_FALSE(conley_zehnder(rotation_path(half)).degenerate);
}

TEST_CASE("hyperbolic path has index zero and even parity") {
  const auto p = hyperbolic_path(1.0);
  CHECK(cz_index(p) == 0);
  CHECK(parity(SymplecticMatrix(p(1.0))) == 0);
  CHECK(morse_index_from_path(p) == 0);
}

TEST_CASE("morse index counts interior returns") {
  for (double a : {0.3, 1.0, 1.5, 2.0, 7.0 / 3.0, 3.0}) {
    std::vector<double> rates{a};
    const auto p = rotation_path(rates);
    CAPTURE(a);
    CHECK(morse_index_from_path(p) == rotation_morse(a));
    CHECK(morse_index_from_path(p) == cz_index(p) - 1);
  }
}

TEST_CASE("simultaneous returns of different blocks are all counted") {
  // Perturbing a degenerate endpoint splits shared return times by ~eps.
  const std::vector<std::vector<double>> cases{{3.0, 1.5, 0.25}, {5.0, 2.5, 5.0 / 12.0}, {27.0, 27.0 / 26.0},
                                               {37.0, 37.0 / 32.0, 37.0 / 33.0}};
  for (const auto& rates : cases) {
    int want = 0;
    for (double a : rates) want += rotation_cz(a);
    CAPTURE(rates[0]);
    CHECK(cz_index(rotation_path(rates)) == want);
  }
}

TEST_CASE("kernel dimension of the endpoint") {
  std::vector<double> rates{1.0, 2.0, 0.5};
  CHECK(cz_nullity(rotation_path(rates)).nullity == 4);
  CHECK(kernel_dimension(Matrix::Identity(4, 4)).nullity == 4);
}

TEST_CASE("block additivity and parity on random compositions") {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> blocks(1, 3);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  const std::vector<double> special{0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 7.0 / 3.0};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> rates;
    const int b = blocks(rng);
    for (int k = 0; k < b; ++k) {
      const int c = pick(rng);
      rates.push_back(c < 7 ? special[static_cast<std::size_t>(c)] : rate(rng));
    }
    std::vector<SymplecticPath> parts;
    int expected = 0;
    for (double a : rates) {
      std::vector<double> one{a};
      parts.push_back(rotation_path(one));
      expected += rotation_cz(a);
    }
    const auto path = block_compose(parts);
    const auto res = conley_zehnder(path);
    CAPTURE(trial);
    CHECK(res.index == expected);
    if (!res.degenerate) CHECK(((res.index % 2) + 2) % 2 == parity(SymplecticMatrix(path(1.0))));
  }
}

TEST_CASE("perturbation rotates backwards") {
  std::vector<double> rates{1.0};
  const auto p = negative_rotation_perturbation(rotation_path(rates), 1e-3);
  CHECK(cz_index(p) == 1);
  CHECK(symplectic_defect(p(0.6)) < 1e-13);
}
