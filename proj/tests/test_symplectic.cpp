#include "reeb/errors.hpp"
#include "reeb/symplectic.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace reeb;

TEST_CASE("standard J squares to -I and is interleaved") {
  const Matrix J = standard_J(3);
  CHECK((J * J + Matrix::Identity(6, 6)).norm() == doctest::Approx(0.0));
  CHECK(J(1, 0) == 1.0);
  CHECK(J(0, 1) == -1.0);
  CHECK(J(2, 0) == 0.0);
}

TEST_CASE("rotation blocks are exact at quarter turns") {
  CHECK(rotation_block(1.0) == Eigen::Matrix2d::Identity());
  CHECK(rotation_block(3.0) == Eigen::Matrix2d::Identity());
  const Eigen::Matrix2d q = rotation_block(0.25);
  CHECK(q(0, 0) == 0.0);
  CHECK(q(1, 0) == 1.0);
  CHECK(symplectic_defect(rotation_block(0.3)) < 1e-15);
}

TEST_CASE("SymplecticMatrix rejects non-symplectic input") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(SymplecticMatrix{m}, InputError);
  Matrix s(2, 2);
  s << 2.0, 0.0, 0.0, 0.5;
  CHECK_NOTHROW(SymplecticMatrix{s});
  CHECK_THROWS_AS(symplectic_defect(Matrix::Identity(3, 3)), InputError);
}

TEST_CASE("rotation paths and block sums stay symplectic") {
  std::vector<double> rates{0.3, 1.5, 2.0};
  const auto p = rotation_path(rates);
  CHECK(p.dim() == 6);
  for (double t : {0.0, 0.17, 0.5, 1.0}) CHECK(symplectic_defect(p(t)) < 1e-13);
  CHECK((p(0.0) - Matrix::Identity(6, 6)).norm() == 0.0);
  // analytic derivative against central differences
  const double h = 1e-6;
  const Matrix fd = (p(0.4 + h) - p(0.4 - h)) / (2 * h);
  CHECK((p.derivative(0.4) - fd).norm() < 1e-7);

  std::vector<double> r1{0.3}, r2{1.5, 2.0};
  std::vector<SymplecticPath> blocks{rotation_path(r1), rotation_path(r2)};
  const auto c = block_compose(blocks);
  CHECK((c(0.7) - p(0.7)).norm() < 1e-15);
}

TEST_CASE("sampled paths interpolate smooth data") {
  std::vector<double> rates{0.8};
  const auto p = rotation_path(rates);
  std::vector<Matrix> vals, ders;
  const int m = 65;
  for (int i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / (m - 1);
    vals.push_back(p(t));
    ders.push_back(p.derivative(t));
  }
  const auto s = SymplecticPath::from_samples(vals, ders);
  CHECK(s.kind() == SymplecticPath::Kind::sampled);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double t = u(rng);
    CHECK((s(t) - p(t)).norm() < 1e-6);
  }
}

TEST_CASE("block_diagonal and identity_path") {
  std::vector<Matrix> b{Matrix::Constant(2, 2, 1.0), Matrix::Constant(2, 2, 2.0)};
  const Matrix d = block_diagonal(b);
  CHECK(d(0, 2) == 0.0);
  CHECK(d(3, 3) == 2.0);
  CHECK((identity_path(2)(0.5) - Matrix::Identity(4, 4)).norm() == 0.0);
}
