#pragma once

#include "reeb/convex_body.hpp"
#include "reeb/reeb_dynamics.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace reeb {

/// Zero-mean real loop u(t) = sum_{k=1}^K a_k cos(2 pi k t) + b_k sin(2 pi k t)
/// in R^{2n}. The complex coefficient at frequency k > 0 is (a_k - i b_k) / 2,
/// and the one at -k is its conjugate.
class FourierLoop {
 public:
  FourierLoop(int dim, int modes);

  /// Loop whose Hamiltonian primitive is the circle t -> e^{2 pi J k t} z0:
  /// u(t) = 2 pi k (J z0 cos 2 pi k t - z0 sin 2 pi k t).
  static FourierLoop circle(const Vector& z0, int modes, int k = 1);

  int dim() const { return dim_; }
  int modes() const { return modes_; }

  /// Packed as [a_1 .. a_K, b_1 .. b_K], each a_k, b_k of length dim.
  Vector& coefficients() { return coef_; }
  const Vector& coefficients() const { return coef_; }
  Eigen::Ref<Vector> a(int k) { return coef_.segment((k - 1) * dim_, dim_); }
  Eigen::Ref<Vector> b(int k) { return coef_.segment((modes_ + k - 1) * dim_, dim_); }
  Vector a(int k) const { return coef_.segment((k - 1) * dim_, dim_); }
  Vector b(int k) const { return coef_.segment((modes_ + k - 1) * dim_, dim_); }
  std::vector<std::complex<double>> complex_coefficient(int k) const;

  Vector value(double t) const;       // u(t)
  Vector derivative(double t) const;  // u'(t)
  Vector primitive(double t) const;   // zero-mean zeta with zeta' = u

  FourierLoop time_shifted(double s) const;  // t -> u(t + s)
  FourierLoop with_modes(int modes) const;   // truncate or zero-pad
  FourierLoop iterate(int k) const;          // t -> u(k t), needs k K modes

  double mode_energy(int k) const { return a(k).squaredNorm() + b(k).squaredNorm(); }

 private:
  int dim_;
  int modes_;
  Vector coef_;
};

/// Psi(u) = int_0^1 -1/2 <J zeta, u> + H*(-J u) dt on a truncated Fourier model.
/// The quadratic part is exact; H* is integrated by the trapezoidal rule on
/// `grid` points, which must be at least 2 K oversample.
class ClarkeFunctional {
 public:
  ClarkeFunctional(const ConvexBody& body, int modes, int oversample = 4, int grid = 0);

  int modes() const { return modes_; }
  int grid() const { return grid_; }
  int num_parameters() const { return 2 * modes_ * body_.dim(); }
  const ConvexBody& body() const { return body_; }

  double quadratic(const FourierLoop& u) const;
  double dual_term(const FourierLoop& u) const;
  double value(const FourierLoop& u) const { return quadratic(u) + dual_term(u); }
  /// Value and gradient with respect to the packed coefficients.
  double evaluate(const Vector& coef, Vector* grad) const;

  /// s > 0 minimizing Psi(s u) when the quadratic part is negative:
  /// s^{beta - 2} = -2 Q / (beta P). Throws InputError otherwise.
  double critical_scaling(const FourierLoop& u) const;

 private:
  ConvexBody body_;
  DualEvaluator dual_;
  int modes_;
  int grid_;
  Matrix cos_, sin_;  // grid x modes
};

double psi(const ConvexBody& body, const FourierLoop& u, int oversample = 4);

/// A = (alpha / 2) ((2 / (alpha - 2)) Psi)^{(alpha - 2) / alpha}; throws
/// InputError for Psi >= 0.
double renormalized_action(double psi_value, double alpha);

struct ClarkeConfig {
  int modes = 64;
  int oversample = 4;
  int random_starts = 16;
  bool plane_starts = true;
  int max_iterations = 4000;
  double gradient_tolerance = 1e-12;
  int stall_window = 50;
  double stall_reduction = 0.01;  // a start stalls if |grad| falls by less than this over the window
  double top_mode_limit = 0.01;   // energy fraction above 3K/4 that triggers the advisory
  bool doubling_check = true;
  std::uint64_t seed = 2024;
  Execution execution = Execution::parallel;
};

struct StartReport {
  std::string kind;  // "plane h" or "random"
  double psi = 0.0;
  double action = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool stalled = false;
  bool converged = false;
};

struct ClarkeResult {
  double systole = 0.0;
  double psi = 0.0;
  double gradient_norm = 0.0;
  FourierLoop loop{2, 1};
  ClosedOrbit orbit;              // Reeb orbit on Sigma with period = systole
  double hamiltonian_residual = 0.0;  // max_t |x'(t) - u(t)| / max_t |u(t)| along x = grad H*(-J u)
  double top_mode_fraction = 0.0;
  std::string advisory;           // set when the mode count looks insufficient
  int modes = 0;
  double doubled_systole = 0.0;   // value after re-solving with 2K modes
  double doubling_delta = 0.0;    // relative change
  std::vector<StartReport> starts;
};

/// Multi-start L-BFGS minimization of Psi; returns c_0 = min A = systole.
ClarkeResult minimize(const ConvexBody& body, const ClarkeConfig& config = {});

/// x(t) = grad H*(-J u(t)), the Hamiltonian orbit attached to a critical loop.
Vector hamiltonian_point(const ClarkeFunctional& f, const FourierLoop& u, double t);

}  // namespace reeb
