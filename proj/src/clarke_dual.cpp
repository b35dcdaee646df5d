#include "reeb/clarke_dual.hpp"

#include "reeb/errors.hpp"
#include "reeb/sampling.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace reeb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vector apply_j(const Vector& v) {
  Vector out(v.size());
  for (Eigen::Index h = 0; h < v.size() / 2; ++h) {
    out(2 * h) = -v(2 * h + 1);
    out(2 * h + 1) = v(2 * h);
  }
  return out;
}

class PsiFunction final : public ceres::FirstOrderFunction {
 public:
  explicit PsiFunction(const ClarkeFunctional& f) : f_(f) {}
  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Vector x = Eigen::Map<const Vector>(parameters, f_.num_parameters());
    if (gradient) {
      Vector g;
      *cost = f_.evaluate(x, &g);
      Eigen::Map<Vector>(gradient, f_.num_parameters()) = g;
    } else {
      *cost = f_.evaluate(x, nullptr);
    }
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return f_.num_parameters(); }

 private:
  const ClarkeFunctional& f_;
};

class StallMonitor final : public ceres::IterationCallback {
 public:
  StallMonitor(int window, double reduction, double floor) : window_(window), reduction_(reduction), floor_(floor) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    history_.push_back(s.gradient_norm);
    const auto m = history_.size();
    if (static_cast<int>(m) > window_ && s.gradient_norm > floor_ &&
        s.gradient_norm > (1.0 - reduction_) * history_[m - 1 - window_]) {
      stalled_ = true;
      return ceres::SOLVER_ABORT;
    }
    return ceres::SOLVER_CONTINUE;
  }
  bool stalled() const { return stalled_; }

 private:
  int window_;
  double reduction_;
  double floor_;
  std::vector<double> history_;
  bool stalled_ = false;
};

struct StartOutcome {
  FourierLoop loop{2, 1};
  StartReport report;
};

StartOutcome run_start(const ClarkeFunctional& f, FourierLoop start, const std::string& kind,
                       const ClarkeConfig& cfg) {
  StartOutcome out{start, {}};
  out.report.kind = kind;
  try {
    const double s = f.critical_scaling(start);
    out.loop.coefficients() *= s;
  } catch (const InputError&) {
  }
  Vector x = out.loop.coefficients();
  ceres::GradientProblem problem(new PsiFunction(f));
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = cfg.max_iterations;
  options.function_tolerance = 0.0;
  options.gradient_tolerance = cfg.gradient_tolerance;
  options.parameter_tolerance = 0.0;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  StallMonitor monitor(cfg.stall_window, cfg.stall_reduction, 1e3 * cfg.gradient_tolerance);
  options.callbacks.push_back(&monitor);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);
  out.loop.coefficients() = x;
  Vector g;
  out.report.psi = f.evaluate(x, &g);
  out.report.gradient_norm = g.norm();
  out.report.iterations = static_cast<int>(summary.iterations.size());
  out.report.stalled = monitor.stalled();
  out.report.converged = out.report.psi < 0 && out.report.gradient_norm < 1e-6 * std::max(1.0, std::fabs(out.report.psi));
  if (out.report.psi < 0) out.report.action = renormalized_action(out.report.psi, f.body().alpha());
  return out;
}

}  // namespace

FourierLoop::FourierLoop(int dim, int modes) : dim_(dim), modes_(modes), coef_(Vector::Zero(2 * dim * modes)) {
  if (dim < 2 || dim % 2 != 0) throw InputError("loop dimension must be even and positive");
  if (modes < 1) throw InputError("need at least one Fourier mode");
}

FourierLoop FourierLoop::circle(const Vector& z0, int modes, int k) {
  if (k < 1 || k > modes) throw InputError("circle frequency out of range");
  FourierLoop u(static_cast<int>(z0.size()), modes);
  u.a(k) = kTwoPi * k * apply_j(z0);
  u.b(k) = -kTwoPi * k * z0;
  return u;
}

std::vector<std::complex<double>> FourierLoop::complex_coefficient(int k) const {
  if (k == 0 || std::abs(k) > modes_) return std::vector<std::complex<double>>(dim_, 0.0);
  const int m = std::abs(k);
  const double sign = k > 0 ? -1.0 : 1.0;
  std::vector<std::complex<double>> c(dim_);
  for (int i = 0; i < dim_; ++i) c[i] = {0.5 * a(m)(i), 0.5 * sign * b(m)(i)};
  return c;
}

Vector FourierLoop::value(double t) const {
  Vector u = Vector::Zero(dim_);
  for (int k = 1; k <= modes_; ++k) u += std::cos(kTwoPi * k * t) * a(k) + std::sin(kTwoPi * k * t) * b(k);
  return u;
}

Vector FourierLoop::derivative(double t) const {
  Vector u = Vector::Zero(dim_);
  for (int k = 1; k <= modes_; ++k)
    u += (kTwoPi * k) * (-std::sin(kTwoPi * k * t) * a(k) + std::cos(kTwoPi * k * t) * b(k));
  return u;
}

Vector FourierLoop::primitive(double t) const {
  Vector z = Vector::Zero(dim_);
  for (int k = 1; k <= modes_; ++k)
    z += (std::sin(kTwoPi * k * t) * a(k) - std::cos(kTwoPi * k * t) * b(k)) / (kTwoPi * k);
  return z;
}

FourierLoop FourierLoop::time_shifted(double s) const {
  FourierLoop out(dim_, modes_);
  for (int k = 1; k <= modes_; ++k) {
    const double c = std::cos(kTwoPi * k * s), sn = std::sin(kTwoPi * k * s);
    out.a(k) = c * a(k) + sn * b(k);
    out.b(k) = -sn * a(k) + c * b(k);
  }
  return out;
}

FourierLoop FourierLoop::with_modes(int modes) const {
  FourierLoop out(dim_, modes);
  for (int k = 1; k <= std::min(modes, modes_); ++k) {
    out.a(k) = a(k);
    out.b(k) = b(k);
  }
  return out;
}

FourierLoop FourierLoop::iterate(int k) const {
  if (k < 1) throw InputError("iterate needs k >= 1");
  FourierLoop out(dim_, k * modes_);
  for (int j = 1; j <= modes_; ++j) {
    out.a(k * j) = a(j);
    out.b(k * j) = b(j);
  }
  return out;
}

ClarkeFunctional::ClarkeFunctional(const ConvexBody& body, int modes, int oversample, int grid)
    : body_(body), dual_(body), modes_(modes) {
  if (modes < 1) throw InputError("need at least one Fourier mode");
  if (oversample < 1) throw InputError("oversample must be at least 1");
  const int required = 2 * modes * oversample;
  grid_ = grid == 0 ? required : grid;
  if (grid_ < required)
    throw InputError("quadrature grid of " + std::to_string(grid_) + " points is below 2 K oversample = " +
                     std::to_string(required));
  cos_.resize(grid_, modes_);
  sin_.resize(grid_, modes_);
  for (int j = 0; j < grid_; ++j)
    for (int k = 1; k <= modes_; ++k) {
      const double ang = kTwoPi * k * j / grid_;
      cos_(j, k - 1) = std::cos(ang);
      sin_(j, k - 1) = std::sin(ang);
    }
}

double ClarkeFunctional::quadratic(const FourierLoop& u) const {
  double q = 0;
  for (int k = 1; k <= std::min(u.modes(), modes_); ++k) q -= 0.5 * apply_j(u.a(k)).dot(u.b(k)) / (kTwoPi * k);
  return q;
}

double ClarkeFunctional::dual_term(const FourierLoop& u) const {
  FourierLoop v = u.modes() == modes_ ? u : u.with_modes(modes_);
  return evaluate(v.coefficients(), nullptr) - quadratic(v);
}

double ClarkeFunctional::evaluate(const Vector& coef, Vector* grad) const {
  const int d = body_.dim();
  const Eigen::Map<const Matrix> a(coef.data(), d, modes_);
  const Eigen::Map<const Matrix> b(coef.data() + d * modes_, d, modes_);
  const Matrix values = a * cos_.transpose() + b * sin_.transpose();  // d x grid
  double dual = 0;
  Matrix g(d, grid_);
  Vector w(d), gw(d);
  for (int j = 0; j < grid_; ++j) {
    w = -apply_j(values.col(j));
    if (grad) {
      dual += dual_.value_and_gradient(w, gw);
      g.col(j) = apply_j(gw);
    } else {
      dual += dual_.value(w);
    }
  }
  dual /= grid_;
  double quad = 0;
  for (int k = 0; k < modes_; ++k) quad -= 0.5 * apply_j(a.col(k)).dot(b.col(k)) / (kTwoPi * (k + 1));
  if (grad) {
    grad->resize(coef.size());
    Eigen::Map<Matrix> ga(grad->data(), d, modes_);
    Eigen::Map<Matrix> gb(grad->data() + d * modes_, d, modes_);
    ga = g * cos_ / grid_;
    gb = g * sin_ / grid_;
    for (int k = 0; k < modes_; ++k) {
      const double c = 0.5 / (kTwoPi * (k + 1));
      ga.col(k) += c * apply_j(b.col(k));
      gb.col(k) -= c * apply_j(a.col(k));
    }
  }
  return quad + dual;
}

double ClarkeFunctional::critical_scaling(const FourierLoop& u) const {
  const double q = quadratic(u);
  const double p = dual_term(u);
  if (!(q < 0) || !(p > 0)) throw InputError("loop has no critical amplitude (quadratic part must be negative)");
  const double beta = body_.beta();
  return std::pow(-2.0 * q / (beta * p), 1.0 / (beta - 2.0));
}

double psi(const ConvexBody& body, const FourierLoop& u, int oversample) {
  return ClarkeFunctional(body, u.modes(), oversample).value(u);
}

double renormalized_action(double psi_value, double alpha) {
  if (!(psi_value < 0)) throw InputError("renormalized action needs Psi < 0");
  if (!(alpha > 1.0 && alpha < 2.0)) throw InputError("alpha must lie in (1, 2)");
  return 0.5 * alpha * std::pow(2.0 / (alpha - 2.0) * psi_value, (alpha - 2.0) / alpha);
}

Vector hamiltonian_point(const ClarkeFunctional& f, const FourierLoop& u, double t) {
  return DualEvaluator(f.body()).gradient(-apply_j(u.value(t)));
}

ClarkeResult minimize(const ConvexBody& body, const ClarkeConfig& cfg) {
  if (cfg.modes < 8) throw InputError("minimize needs at least 8 Fourier modes");
  const int d = body.dim();
  const ClarkeFunctional f(body, cfg.modes, cfg.oversample);

  std::vector<std::pair<FourierLoop, std::string>> starts;
  if (cfg.plane_starts)
    for (int h = 0; h < body.n(); ++h) {
      Vector z0 = Vector::Zero(d);
      z0(2 * h) = 1.0;
      starts.emplace_back(FourierLoop::circle(z0, cfg.modes), "plane " + std::to_string(h + 1));
    }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  const auto dirs = random_sphere_points(d, cfg.random_starts, cfg.seed);
  for (int s = 0; s < cfg.random_starts; ++s) {
    FourierLoop u = FourierLoop::circle(dirs[s], cfg.modes);
    for (Eigen::Index i = 0; i < u.coefficients().size(); ++i) u.coefficients()(i) += 0.05 * normal(rng);
    starts.emplace_back(std::move(u), "random");
  }

  std::vector<StartOutcome> outcomes(starts.size());
#pragma omp parallel for schedule(dynamic) if (cfg.execution == Execution::parallel)
  for (int s = 0; s < static_cast<int>(starts.size()); ++s)
    outcomes[s] = run_start(f, starts[s].first, starts[s].second, cfg);

  ClarkeResult result;
  result.modes = cfg.modes;
  const StartOutcome* best = nullptr;
  for (const auto& o : outcomes) {
    result.starts.push_back(o.report);
    if (!o.report.converged) continue;
    if (!best) {
      best = &o;
      continue;
    }
    const double gap = o.report.psi - best->report.psi;
    const double tie = 1e-12 * std::fabs(best->report.psi);
    if (gap < -tie || (std::fabs(gap) <= tie && o.report.gradient_norm < best->report.gradient_norm)) best = &o;
  }
  if (!best) {
    double best_res = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) best_res = std::min(best_res, o.report.gradient_norm);
    throw NumericalError("all Clarke minimization starts stalled; best gradient norm " + std::to_string(best_res));
  }
  result.loop = best->loop;
  result.psi = best->report.psi;
  result.gradient_norm = best->report.gradient_norm;
  result.systole = best->report.action;

  double total = 0, top = 0;
  for (int k = 1; k <= cfg.modes; ++k) {
    const double e = result.loop.mode_energy(k);
    total += e;
    if (4 * k > 3 * cfg.modes) top += e;
  }
  result.top_mode_fraction = total > 0 ? top / total : 0.0;
  if (result.top_mode_fraction > cfg.top_mode_limit)
    result.advisory = "more than " + std::to_string(cfg.top_mode_limit * 100) +
                      "% of the loop energy sits in the top quarter of the modes; increase K";

  if (cfg.doubling_check) {
    ClarkeConfig fine = cfg;
    fine.modes = 2 * cfg.modes;
    const ClarkeFunctional f2(body, fine.modes, cfg.oversample);
    const StartOutcome o = run_start(f2, result.loop.with_modes(fine.modes), "doubled", fine);
    result.doubled_systole = o.report.psi < 0 ? o.report.action : std::numeric_limits<double>::quiet_NaN();
    result.doubling_delta = std::fabs(result.doubled_systole - result.systole) / result.systole;
  }

  // Orbit reconstruction and the pointwise Hamiltonian equation x' = u.
  const DualEvaluator dual(body);
  double max_u = 0, max_res = 0;
  for (int j = 0; j < f.grid(); ++j) {
    const double t = static_cast<double>(j) / f.grid();
    const Vector u = result.loop.value(t);
    const Vector x = dual.gradient(-apply_j(u));
    const Vector xdot = body.hess_h(x).ldlt().solve(-apply_j(result.loop.derivative(t)));
    max_u = std::max(max_u, u.norm());
    max_res = std::max(max_res, (xdot - u).norm());
  }
  result.hamiltonian_residual = max_u > 0 ? max_res / max_u : 0.0;
  const Vector x0 = hamiltonian_point(f, result.loop, 0.0);
  result.orbit.initial_point = body.project(x0);
  result.orbit.period = result.systole;
  result.orbit.residual = (integrate_reeb(body, result.orbit.initial_point, result.systole) - result.orbit.initial_point).norm();
  return result;
}

}  // namespace reeb
