#pragma once

#include "reeb/symplectic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace reeb {

/// Strongly convex body C with boundary Sigma = {F = 1}, where
///   F(z) = pi sum_h |z_h|^2 / a_h + epsilon sum_h c_h |z_h|^4.
/// The degree-2 homogenization has the closed form
///   H2 = (q + sqrt(q^2 + 4 epsilon p)) / 2,  q = pi sum |z_h|^2 / a_h,  p = sum c_h |z_h|^4,
/// and H = H2^{alpha/2} is the degree-alpha Hamiltonian with H^{-1}(1) = Sigma.
class ConvexBody {
 public:
  static constexpr double default_alpha = 1.5;

  static ConvexBody ellipsoid(std::vector<double> a, double alpha = default_alpha);
  /// Round ball of radius r in R^{2n}: E(pi r^2, ..., pi r^2).
  static ConvexBody ball(int n, double radius, double alpha = default_alpha);
  static ConvexBody perturbed(std::vector<double> a, double epsilon, std::vector<double> quartic,
                              double alpha = default_alpha);

  /// Same Sigma, new homogeneity degree. Throws InputError unless 1 < alpha < 2.
  ConvexBody homogenize(double alpha) const;

  int n() const { return static_cast<int>(a_.size()); }
  int dim() const { return 2 * n(); }
  double alpha() const { return alpha_; }
  double beta() const { return alpha_ / (alpha_ - 1.0); }
  const std::vector<double>& a() const { return a_; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& quartic() const { return quartic_; }
  /// True when the quartic term vanishes identically.
  bool is_ellipsoid() const;

  double base(const Vector& z) const;  // F

  double h2(const Vector& z) const;
  Vector grad_h2(const Vector& z) const;
  Matrix hess_h2(const Vector& z) const;

  double h(const Vector& z) const;
  Vector grad_h(const Vector& z) const;
  Matrix hess_h(const Vector& z) const;

  /// Reeb vector field J grad H2, equal to the Reeb field on Sigma.
  Vector reeb_field(const Vector& z) const;

  /// z / sqrt(H2(z)), the radial projection onto Sigma.
  Vector project(const Vector& z) const;

  /// Period of the closed Reeb orbit filling the h-th coordinate plane:
  /// pi / kappa_h with kappa_h = (pi / a_h + sqrt(pi^2 / a_h^2 + 4 epsilon c_h)) / 2.
  double plane_orbit_period(int h) const;

  /// Largest distance between two points of Sigma, bounded by 2 R.
  double diameter() const;

 private:
  ConvexBody(std::vector<double> a, double epsilon, std::vector<double> quartic, double alpha);

  std::vector<double> a_;
  double epsilon_ = 0.0;
  std::vector<double> quartic_;
  double alpha_ = default_alpha;
};

struct ConvexityReport {
  bool strongly_convex = false;
  double min_eigenvalue = 0.0;  // smallest Hessian eigenvalue of H2 restricted to T Sigma
  Vector worst_point;
  int samples = 0;
  double threshold = 1e-8;
};

/// Samples boundary points and checks that the Hessian of H2 restricted to
/// the tangent space is positive definite with margin > threshold.
ConvexityReport validate_convexity(const ConvexBody& body, int samples = 1000, std::uint64_t seed = 7,
                                   double threshold = 1e-8);

/// Relative deviation of H(s z) / (s^alpha H(z)) from 1.
double homogeneity_defect(const ConvexBody& body, const Vector& z, double s);

/// Legendre dual H*(w) = max_z <z, w> - H(z), degree beta = alpha / (alpha - 1).
class DualEvaluator {
 public:
  explicit DualEvaluator(const ConvexBody& body, int max_iter = 50, double tol = 1e-12);

  const ConvexBody& body() const { return body_; }
  double beta() const { return body_.beta(); }

  struct SupportPoint {
    double support = 0.0;  // h_C(w) = max { <z, w> : z in C }
    Vector point;          // the maximizer z* on Sigma
    int iterations = 0;
  };

  /// Closed form for ellipsoids; otherwise Newton on grad H2(y) = w started at
  /// the maximizer for the quadric part, then z* = y / sqrt(H2(y)).
  SupportPoint support_point(const Vector& w) const;
  double support(const Vector& w) const { return support_point(w).support; }

  /// beta^{-1} alpha^{1 - beta} h_C(w)^beta.
  double value(const Vector& w) const;
  /// alpha^{1 - beta} h_C(w)^{beta - 1} z*(w).
  Vector gradient(const Vector& w) const;
  /// Value and gradient from one support solve.
  double value_and_gradient(const Vector& w, Vector& grad) const;

 private:
  ConvexBody body_;
  int max_iter_;
  double tol_;
};

struct PinchingRadii {
  double r = 0.0;  // inradius: min |z| over Sigma
  double R = 0.0;  // circumradius: max |z| over Sigma
  Vector r_point, R_point;
  int starts = 0;
  int agreeing_r = 0;  // starts reaching r within 1e-8 relative
  int agreeing_R = 0;
  bool flagged = false;  // fewer than two starts corroborate one of the extremes
  std::string note;
};

/// Multi-start Riemannian Newton on the unit sphere for the extrema of H2;
/// r = 1 / sqrt(max H2), R = 1 / sqrt(min H2).
PinchingRadii pinching_radii(const ConvexBody& body, int random_starts = 24, std::uint64_t seed = 11);

}  // namespace reeb
