#include "reeb/convex_body.hpp"

#include "reeb/errors.hpp"
#include "reeb/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace reeb {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InputError("alpha must lie in the open interval (1, 2)");
}

}  // namespace

ConvexBody::ConvexBody(std::vector<double> a, double epsilon, std::vector<double> quartic, double alpha)
    : a_(std::move(a)), epsilon_(epsilon), quartic_(std::move(quartic)), alpha_(alpha) {
  if (a_.empty()) throw InputError("body needs at least one parameter");
  for (double x : a_)
    if (!(x > 0) || !std::isfinite(x)) throw InputError("quadric parameters must be positive and finite");
  if (quartic_.empty()) quartic_.assign(a_.size(), 0.0);
  if (quartic_.size() != a_.size()) throw InputError("quartic coefficients must match the number of planes");
  if (!std::isfinite(epsilon_)) throw InputError("epsilon must be finite");
  for (double c : quartic_) {
    if (!std::isfinite(c)) throw InputError("quartic coefficients must be finite");
    if (epsilon_ * c < 0) throw InputError("epsilon * quartic coefficients must be non-negative");
  }
  check_alpha(alpha_);
}

ConvexBody ConvexBody::ellipsoid(std::vector<double> a, double alpha) {
  const std::size_t n = a.size();
  return ConvexBody(std::move(a), 0.0, std::vector<double>(n, 0.0), alpha);
}

ConvexBody ConvexBody::ball(int n, double radius, double alpha) {
  if (n < 1 || !(radius > 0)) throw InputError("ball needs n >= 1 and radius > 0");
  return ellipsoid(std::vector<double>(n, kPi * radius * radius), alpha);
}

ConvexBody ConvexBody::perturbed(std::vector<double> a, double epsilon, std::vector<double> quartic, double alpha) {
  return ConvexBody(std::move(a), epsilon, std::move(quartic), alpha);
}

ConvexBody ConvexBody::homogenize(double alpha) const {
  check_alpha(alpha);
  ConvexBody b = *this;
  b.alpha_ = alpha;
  return b;
}

bool ConvexBody::is_ellipsoid() const {
  return epsilon_ == 0.0 || std::all_of(quartic_.begin(), quartic_.end(), [](double c) { return c == 0.0; });
}

double ConvexBody::base(const Vector& z) const {
  double q = 0, p = 0;
  for (int h = 0; h < n(); ++h) {
    const double r2 = z.segment<2>(2 * h).squaredNorm();
    q += kPi * r2 / a_[h];
    p += quartic_[h] * r2 * r2;
  }
  return q + epsilon_ * p;
}

double ConvexBody::h2(const Vector& z) const {
  double q = 0, p = 0;
  for (int h = 0; h < n(); ++h) {
    const double r2 = z.segment<2>(2 * h).squaredNorm();
    q += kPi * r2 / a_[h];
    p += quartic_[h] * r2 * r2;
  }
  if (is_ellipsoid()) return q;
  return 0.5 * (q + std::sqrt(q * q + 4.0 * epsilon_ * p));
}

Vector ConvexBody::grad_h2(const Vector& z) const {
  Vector gq(dim()), gp(dim());
  double q = 0, p = 0;
  for (int h = 0; h < n(); ++h) {
    const auto zh = z.segment<2>(2 * h);
    const double r2 = zh.squaredNorm();
    q += kPi * r2 / a_[h];
    p += quartic_[h] * r2 * r2;
    gq.segment<2>(2 * h) = (2.0 * kPi / a_[h]) * zh;
    gp.segment<2>(2 * h) = (4.0 * quartic_[h] * r2) * zh;
  }
  if (is_ellipsoid()) return gq;
  const double d = std::sqrt(q * q + 4.0 * epsilon_ * p);
  if (d == 0.0) return Vector::Zero(dim());
  return 0.5 * (gq + (q * gq + 2.0 * epsilon_ * gp) / d);
}

Matrix ConvexBody::hess_h2(const Vector& z) const {
  Matrix hq = Matrix::Zero(dim(), dim());
  for (int h = 0; h < n(); ++h) hq.block<2, 2>(2 * h, 2 * h).diagonal().setConstant(2.0 * kPi / a_[h]);
  if (is_ellipsoid()) return hq;
  Vector gq(dim()), gp(dim());
  Matrix hp = Matrix::Zero(dim(), dim());
  double q = 0, p = 0;
  for (int h = 0; h < n(); ++h) {
    const Eigen::Vector2d zh = z.segment<2>(2 * h);
    const double r2 = zh.squaredNorm();
    q += kPi * r2 / a_[h];
    p += quartic_[h] * r2 * r2;
    gq.segment<2>(2 * h) = (2.0 * kPi / a_[h]) * zh;
    gp.segment<2>(2 * h) = (4.0 * quartic_[h] * r2) * zh;
    hp.block<2, 2>(2 * h, 2 * h) =
        4.0 * quartic_[h] * (r2 * Eigen::Matrix2d::Identity() + 2.0 * zh * zh.transpose());
  }
  const double d = std::sqrt(q * q + 4.0 * epsilon_ * p);
  if (d == 0.0) return hq;
  const Vector g = q * gq + 2.0 * epsilon_ * gp;
  const Matrix dg = gq * gq.transpose() + q * hq + 2.0 * epsilon_ * hp;
  return 0.5 * (hq + dg / d - g * g.transpose() / (d * d * d));
}

double ConvexBody::h(const Vector& z) const { return std::pow(h2(z), 0.5 * alpha_); }

Vector ConvexBody::grad_h(const Vector& z) const {
  const double v = h2(z);
  if (v == 0.0) return Vector::Zero(dim());
  return (0.5 * alpha_ * std::pow(v, 0.5 * alpha_ - 1.0)) * grad_h2(z);
}

Matrix ConvexBody::hess_h(const Vector& z) const {
  const double v = h2(z);
  if (v == 0.0) throw InputError("Hessian of H is singular at the origin");
  const Vector g = grad_h2(z);
  const double k = 0.5 * alpha_ - 1.0;
  return (0.5 * alpha_ * std::pow(v, k)) * (hess_h2(z) + (k / v) * g * g.transpose());
}

Vector ConvexBody::reeb_field(const Vector& z) const {
  const Vector g = grad_h2(z);
  Vector out(dim());
  for (int h = 0; h < n(); ++h) {
    out(2 * h) = -g(2 * h + 1);
    out(2 * h + 1) = g(2 * h);
  }
  return out;
}

Vector ConvexBody::project(const Vector& z) const {
  const double v = h2(z);
  if (!(v > 0)) throw InputError("cannot project the origin onto the boundary");
  return z / std::sqrt(v);
}

double ConvexBody::plane_orbit_period(int h) const {
  if (h < 0 || h >= n()) throw InputError("plane index out of range");
  const double s = kPi / a_[h];
  const double kappa = 0.5 * (s + std::sqrt(s * s + 4.0 * epsilon_ * quartic_[h]));
  return kPi / kappa;
}

double ConvexBody::diameter() const { return 2.0 * pinching_radii(*this, 4).R; }

ConvexityReport validate_convexity(const ConvexBody& body, int samples, std::uint64_t seed, double threshold) {
  ConvexityReport report;
  report.samples = samples;
  report.threshold = threshold;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto dirs = random_sphere_points(body.dim(), samples, seed);
  for (int i = 0; i < body.n(); ++i) {
    Vector e = Vector::Zero(body.dim());
    e(2 * i) = 1.0;
    dirs.push_back(e);
  }
  for (const Vector& u : dirs) {
    const Vector z = body.project(u);
    const Vector nrm = body.grad_h2(z).normalized();
    // Orthonormal basis of the tangent space from a Householder reflection.
    Eigen::HouseholderQR<Matrix> qr(nrm);
    const Matrix basis = qr.householderQ() * Matrix::Identity(body.dim(), body.dim());
    const Matrix t = basis.rightCols(body.dim() - 1);
    const Matrix restricted = t.transpose() * body.hess_h2(z) * t;
    Eigen::SelfAdjointEigenSolver<Matrix> es(restricted, Eigen::EigenvaluesOnly);
    const double lmin = body.dim() > 1 ? es.eigenvalues()(0) : std::numeric_limits<double>::infinity();
    if (lmin < report.min_eigenvalue) {
      report.min_eigenvalue = lmin;
      report.worst_point = z;
    }
  }
  report.strongly_convex = report.min_eigenvalue > threshold;
  return report;
}

double homogeneity_defect(const ConvexBody& body, const Vector& z, double s) {
  const double lhs = body.h(s * z);
  const double rhs = std::pow(s, body.alpha()) * body.h(z);
  return std::fabs(lhs - rhs) / std::max(std::fabs(rhs), std::numeric_limits<double>::min());
}

DualEvaluator::DualEvaluator(const ConvexBody& body, int max_iter, double tol)
    : body_(body), max_iter_(max_iter), tol_(tol) {}

DualEvaluator::SupportPoint DualEvaluator::support_point(const Vector& w) const {
  SupportPoint sp;
  const double wn = w.norm();
  if (wn == 0.0) {
    sp.point = Vector::Zero(w.size());
    return sp;
  }
  const auto& a = body_.a();
  Vector y(w.size());
  for (int h = 0; h < body_.n(); ++h) y.segment<2>(2 * h) = (a[h] / (2.0 * kPi)) * w.segment<2>(2 * h);
  if (!body_.is_ellipsoid()) {
    // Newton on grad H2(y) = w, i.e. minimizing the convex H2(y) - <w, y>.
    auto objective = [&](const Vector& v) { return body_.h2(v) - w.dot(v); };
    Vector r = body_.grad_h2(y) - w;
    double f = objective(y);
    int it = 0;
    for (; it < max_iter_ && r.norm() > tol_ * wn; ++it) {
      const Vector d = body_.hess_h2(y).ldlt().solve(-r);
      double step = 1.0;
      Vector trial = y + d;
      double ft = objective(trial);
      Vector rt = body_.grad_h2(trial) - w;
      // Near the root the objective decrease drowns in rounding; a smaller
      // residual is accepted instead.
      while (ft > f + 1e-4 * step * r.dot(d) && rt.norm() >= r.norm() && step > 1e-12) {
        step *= 0.5;
        trial = y + step * d;
        ft = objective(trial);
        rt = body_.grad_h2(trial) - w;
      }
      y = trial;
      f = ft;
      r = rt;
    }
    sp.iterations = it;
    if (r.norm() > tol_ * wn * 1e3)
      throw NumericalError("support function Newton did not converge: gradient residual " +
                           std::to_string(r.norm()) + ", best value " + std::to_string(2.0 * std::sqrt(body_.h2(y))));
  }
  const double root = std::sqrt(body_.h2(y));
  sp.support = 2.0 * root;
  sp.point = y / root;
  return sp;
}

double DualEvaluator::value(const Vector& w) const {
  const double hc = support(w);
  if (hc == 0.0) return 0.0;
  const double b = beta();
  return std::pow(body_.alpha(), 1.0 - b) * std::pow(hc, b) / b;
}

Vector DualEvaluator::gradient(const Vector& w) const {
  Vector g;
  value_and_gradient(w, g);
  return g;
}

double DualEvaluator::value_and_gradient(const Vector& w, Vector& grad) const {
  const SupportPoint sp = support_point(w);
  if (sp.support == 0.0) {
    grad = Vector::Zero(w.size());
    return 0.0;
  }
  const double b = beta();
  const double c = std::pow(body_.alpha(), 1.0 - b) * std::pow(sp.support, b - 1.0);
  grad = c * sp.point;
  return c * sp.support / b;
}

namespace {

struct SphereExtremum {
  double value;
  Vector point;
};

// Riemannian Newton for the maximum (sign = +1) or minimum (sign = -1) of H2
// on the unit sphere, with gradient fallback and backtracking.
SphereExtremum sphere_optimize(const ConvexBody& body, Vector u, double sign) {
  const int d = body.dim();
  auto f = [&](const Vector& v) { return sign * body.h2(v); };
  double fu = f(u);
  for (int it = 0; it < 200; ++it) {
    const Vector egrad = sign * body.grad_h2(u);
    const Matrix p = Matrix::Identity(d, d) - u * u.transpose();
    const Vector g = p * egrad;
    if (g.norm() <= 1e-14 * std::max(1.0, std::fabs(fu))) break;
    const Matrix hess = p * (sign * body.hess_h2(u)) * p - u.dot(egrad) * p;
    Vector dir = (hess - u * u.transpose()).colPivHouseholderQr().solve(-g);
    dir = p * dir;
    if (!(dir.dot(g) > 0) || !dir.allFinite()) dir = g;
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vector trial = (u + step * dir).normalized();
      const double ft = f(trial);
      if (ft >= fu) {
        moved = ft > fu || (trial - u).norm() > 0;
        u = trial;
        fu = ft;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {sign * fu, u};
}

}  // namespace

PinchingRadii pinching_radii(const ConvexBody& body, int random_starts, std::uint64_t seed) {
  std::vector<Vector> starts;
  for (int i = 0; i < body.dim(); ++i) {
    Vector e = Vector::Zero(body.dim());
    e(i) = 1.0;
    starts.push_back(e);
  }
  for (auto& v : random_sphere_points(body.dim(), random_starts, seed)) starts.push_back(v);

  std::vector<SphereExtremum> maxima, minima;
  for (const Vector& s : starts) {
    maxima.push_back(sphere_optimize(body, s, +1.0));
    minima.push_back(sphere_optimize(body, s, -1.0));
  }
  auto best_max = *std::max_element(maxima.begin(), maxima.end(),
                                    [](const auto& x, const auto& y) { return x.value < y.value; });
  auto best_min = *std::min_element(minima.begin(), minima.end(),
                                    [](const auto& x, const auto& y) { return x.value < y.value; });
  PinchingRadii out;
  out.starts = static_cast<int>(starts.size());
  out.r = 1.0 / std::sqrt(best_max.value);
  out.R = 1.0 / std::sqrt(best_min.value);
  out.r_point = out.r * best_max.point;
  out.R_point = out.R * best_min.point;
  for (const auto& m : maxima)
    if (std::fabs(m.value - best_max.value) <= 1e-8 * best_max.value) ++out.agreeing_r;
  for (const auto& m : minima)
    if (std::fabs(m.value - best_min.value) <= 1e-8 * best_min.value) ++out.agreeing_R;
  out.flagged = out.agreeing_r < 2 || out.agreeing_R < 2;
  if (out.flagged) out.note = "an extremum was reached by a single start only";
  return out;
}

}  // namespace reeb
