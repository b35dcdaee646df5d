#include "reeb/symplectic.hpp"

#include "reeb/errors.hpp"

#include <cmath>
#include <numbers>

namespace reeb {

Matrix standard_J(int n) {
  if (n < 1) throw InputError("standard_J: n must be positive");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  for (int h = 0; h < n; ++h) {
    j(2 * h, 2 * h + 1) = -1.0;
    j(2 * h + 1, 2 * h) = 1.0;
  }
  return j;
}

double symplectic_defect(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
    throw InputError("symplectic_defect: matrix must be square of even size");
  const Matrix j = standard_J(static_cast<int>(m.rows() / 2));
  return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

SymplecticMatrix::SymplecticMatrix(Matrix m, double tol) : m_(std::move(m)) {
  const double d = symplectic_defect(m_);
  if (!(d <= tol))
    throw InputError("matrix is not symplectic: defect " + std::to_string(d));
}

SymplecticMatrix SymplecticMatrix::identity(int n) {
  return SymplecticMatrix(Matrix::Identity(2 * n, 2 * n));
}

std::pair<double, double> cos_sin_turns(double turns) {
  double r = turns - std::floor(turns);
  if (r == 0.0) return {1.0, 0.0};
  if (r == 0.25) return {0.0, 1.0};
  if (r == 0.5) return {-1.0, 0.0};
  if (r == 0.75) return {0.0, -1.0};
  const double theta = 2.0 * std::numbers::pi * r;
  return {std::cos(theta), std::sin(theta)};
}

Eigen::Matrix2d rotation_block(double turns) {
  auto [c, s] = cos_sin_turns(turns);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

SymplecticPath::SymplecticPath(int dim, Evaluator evaluator, Evaluator derivative, Kind kind)
    : dim_(dim), evaluator_(std::move(evaluator)), derivative_(std::move(derivative)), kind_(kind) {
  if (dim_ < 2 || dim_ % 2 != 0) throw InputError("SymplecticPath: dimension must be even and positive");
  if (!evaluator_) throw InputError("SymplecticPath: missing evaluator");
}

Matrix SymplecticPath::derivative(double t) const {
  if (derivative_) return derivative_(t);
  constexpr double h = 1e-6;
  if (t - h < 0.0) return (-3.0 * evaluator_(t) + 4.0 * evaluator_(t + h) - evaluator_(t + 2 * h)) / (2 * h);
  if (t + h > 1.0) return (3.0 * evaluator_(t) - 4.0 * evaluator_(t - h) + evaluator_(t - 2 * h)) / (2 * h);
  return (evaluator_(t + h) - evaluator_(t - h)) / (2 * h);
}

SymplecticPath SymplecticPath::from_samples(std::vector<Matrix> values, std::vector<Matrix> derivatives) {
  if (values.size() < 2 || values.size() != derivatives.size())
    throw InputError("from_samples: need at least two samples with matching derivatives");
  const int dim = static_cast<int>(values.front().rows());
  auto data = std::make_shared<std::pair<std::vector<Matrix>, std::vector<Matrix>>>(std::move(values),
                                                                                   std::move(derivatives));
  const double h = 1.0 / static_cast<double>(data->first.size() - 1);
  auto locate = [data, h](double t) {
    const auto last = data->first.size() - 2;
    double c = std::clamp(t, 0.0, 1.0) / h;
    auto i = std::min(static_cast<std::size_t>(c), last);
    return std::pair{i, c - static_cast<double>(i)};
  };
  auto eval = [data, h, locate](double t) -> Matrix {
    auto [i, s] = locate(t);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * data->first[i] + (s3 - 2 * s2 + s) * h * data->second[i] +
           (-2 * s3 + 3 * s2) * data->first[i + 1] + (s3 - s2) * h * data->second[i + 1];
  };
  auto deriv = [data, h, locate](double t) -> Matrix {
    auto [i, s] = locate(t);
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * data->first[i] + (-6 * s2 + 6 * s) * data->first[i + 1]) / h +
           (3 * s2 - 4 * s + 1) * data->second[i] + (3 * s2 - 2 * s) * data->second[i + 1];
  };
  return SymplecticPath(dim, eval, deriv, Kind::sampled);
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.rows();
  Matrix out = Matrix::Zero(total, total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

SymplecticPath rotation_path(std::span<const double> rates, double total_time) {
  if (rates.empty()) throw InputError("rotation_path: no rates");
  for (double r : rates)
    if (!std::isfinite(r)) throw InputError("rotation_path: non-finite rate");
  if (!(total_time > 0) || !std::isfinite(total_time)) throw InputError("rotation_path: total_time must be positive");
  std::vector<double> turns(rates.begin(), rates.end());
  for (double& r : turns) r *= total_time;
  const int n = static_cast<int>(turns.size());
  auto eval = [turns, n](double t) -> Matrix {
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    for (int h = 0; h < n; ++h) m.block<2, 2>(2 * h, 2 * h) = rotation_block(turns[h] * t);
    return m;
  };
  auto deriv = [turns, n](double t) -> Matrix {
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    Eigen::Matrix2d j;
    j << 0, -1, 1, 0;
    for (int h = 0; h < n; ++h)
      m.block<2, 2>(2 * h, 2 * h) = 2.0 * std::numbers::pi * turns[h] * j * rotation_block(turns[h] * t);
    return m;
  };
  return SymplecticPath(2 * n, eval, deriv, SymplecticPath::Kind::rotation);
}

SymplecticPath block_compose(std::span<const SymplecticPath> blocks) {
  if (blocks.empty()) throw InputError("block_compose: empty list");
  if (blocks.size() == 1) return blocks.front();
  std::vector<SymplecticPath> parts(blocks.begin(), blocks.end());
  int dim = 0;
  for (const auto& p : parts) dim += p.dim();
  auto shared = std::make_shared<const std::vector<SymplecticPath>>(std::move(parts));
  auto eval = [shared](double t) -> Matrix {
    std::vector<Matrix> mats;
    mats.reserve(shared->size());
    for (const auto& p : *shared) mats.push_back(p(t));
    return block_diagonal(mats);
  };
  auto deriv = [shared](double t) -> Matrix {
    std::vector<Matrix> mats;
    mats.reserve(shared->size());
    for (const auto& p : *shared) mats.push_back(p.derivative(t));
    return block_diagonal(mats);
  };
  return SymplecticPath(dim, eval, deriv, SymplecticPath::Kind::composite);
}

SymplecticPath identity_path(int n) {
  if (n < 1) throw InputError("identity_path: n must be positive");
  auto eval = [n](double) -> Matrix { return Matrix::Identity(2 * n, 2 * n); };
  auto deriv = [n](double) -> Matrix { return Matrix::Zero(2 * n, 2 * n); };
  return SymplecticPath(2 * n, eval, deriv, SymplecticPath::Kind::rotation);
}

}  // namespace reeb
