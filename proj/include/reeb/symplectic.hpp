#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace reeb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Coordinates on R^{2n} are interleaved (x1, y1, x2, y2, ...), so the
/// standard complex structure is block diagonal with blocks [[0,-1],[1,0]]
/// and omega(u, v) = <J u, v> = sum dx_i ^ dy_i.
Matrix standard_J(int n);

/// ||M^T J M - J||_inf.
double symplectic_defect(const Matrix& m);

/// A 2n x 2n matrix checked against M^T J M = J on construction.
class SymplecticMatrix {
 public:
  static constexpr double default_tolerance = 1e-10;

  explicit SymplecticMatrix(Matrix m, double tol = default_tolerance);
  static SymplecticMatrix identity(int n);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  int n() const { return dim() / 2; }
  double defect() const { return symplectic_defect(m_); }

 private:
  Matrix m_;
};

/// Evaluates cos and sin of 2*pi*turns; quarter turns are returned exactly so
/// integer numbers of turns give the identity bit-for-bit.
std::pair<double, double> cos_sin_turns(double turns);

/// e^{2 pi J turns} in Sp(2).
Eigen::Matrix2d rotation_block(double turns);

/// A path t -> Gamma(t) in Sp(2n), t in [0, 1], with Gamma(0) = I.
class SymplecticPath {
 public:
  enum class Kind { rotation, sampled, linearized_flow, composite };
  using Evaluator = std::function<Matrix(double)>;

  /// `derivative` may be empty, in which case dGamma/dt is taken by finite
  /// differences.
  SymplecticPath(int dim, Evaluator evaluator, Evaluator derivative, Kind kind);

  int dim() const { return dim_; }
  int n() const { return dim_ / 2; }
  Kind kind() const { return kind_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  Matrix operator()(double t) const { return evaluator_(t); }
  Matrix derivative(double t) const;

  /// Sampled kind: cubic Hermite interpolation through (t_i, Gamma_i, Gamma_i')
  /// on the uniform grid t_i = i / (samples - 1).
  static SymplecticPath from_samples(std::vector<Matrix> values, std::vector<Matrix> derivatives);

 private:
  int dim_;
  Evaluator evaluator_;
  Evaluator derivative_;
  Kind kind_;
};

/// Block-diagonal path of e^{2 pi J rate_h total_time t}, one 2x2 block per rate.
SymplecticPath rotation_path(std::span<const double> rates, double total_time = 1.0);

/// Direct sum of paths sharing the parameter t in [0, 1].
SymplecticPath block_compose(std::span<const SymplecticPath> blocks);

/// Constant identity path in Sp(2n).
SymplecticPath identity_path(int n);

/// Block-diagonal assembly of square matrices.
Matrix block_diagonal(std::span<const Matrix> blocks);

}  // namespace reeb
