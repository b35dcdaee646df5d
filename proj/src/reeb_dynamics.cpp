#include "reeb/reeb_dynamics.hpp"

#include "reeb/errors.hpp"
#include "reeb/sampling.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace reeb {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;
using Stepper = odeint::runge_kutta_fehlberg78<State>;

Vector apply_j(const Vector& v) {
  Vector out(v.size());
  for (Eigen::Index h = 0; h < v.size() / 2; ++h) {
    out(2 * h) = -v(2 * h + 1);
    out(2 * h + 1) = v(2 * h);
  }
  return out;
}

Matrix apply_j(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index h = 0; h < m.rows() / 2; ++h) {
    out.row(2 * h) = -m.row(2 * h + 1);
    out.row(2 * h + 1) = m.row(2 * h);
  }
  return out;
}

// grad and Hessian of H2^{k/2}.
Vector grad_degree(const ConvexBody& b, const Vector& z, double k) {
  const double v = b.h2(z);
  return (0.5 * k * std::pow(v, 0.5 * k - 1.0)) * b.grad_h2(z);
}

Matrix hess_degree(const ConvexBody& b, const Vector& z, double k) {
  const double v = b.h2(z);
  const Vector g = b.grad_h2(z);
  const double e = 0.5 * k - 1.0;
  return (0.5 * k * std::pow(v, e)) * (b.hess_h2(z) + (e / v) * g * g.transpose());
}

// Steps `state` from t0 to t1 with the controlled RKF78 stepper, calling
// `after_step` on each accepted step.
template <class System, class After>
int drive(System&& sys, State& state, double t0, double t1, const IntegratorOptions& opts, After&& after_step) {
  const double span = t1 - t0;
  if (span == 0.0) return 0;
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, Stepper());
  const double sign = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double dt = sign * std::min(opts.initial_step, std::fabs(span));
  const double floor_dt = 1e-14 * std::max(1.0, std::fabs(span));
  int steps = 0;
  while (true) {
    const double remaining = t1 - t;
    if (sign * remaining <= 1e-15 * std::max(1.0, std::fabs(t1))) break;
    if (sign * (dt - remaining) > 0) dt = remaining;
    const auto res = stepper.try_step(sys, state, t, dt);
    if (res == odeint::success) {
      ++steps;
      after_step(state);
    } else if (std::fabs(dt) < floor_dt) {
      throw NumericalError("integrator step size underflow at t = " + std::to_string(t));
    }
    if (steps > 50'000'000) throw NumericalError("integrator exceeded the step budget");
  }
  return steps;
}

struct LinearizedData {
  std::vector<Vector> points;
  std::vector<Matrix> phis;
};

Matrix vec_to_mat(const State& s, int d) {
  Matrix m(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) m(r, c) = s[d + c * d + r];
  return m;
}

State pack(const Vector& z, const Matrix& phi) {
  const int d = static_cast<int>(z.size());
  State s(d + d * d);
  for (int i = 0; i < d; ++i) s[i] = z(i);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) s[d + c * d + r] = phi(r, c);
  return s;
}

struct VariationalSystem {
  const ConvexBody* body;
  double degree;
  void operator()(const State& s, State& ds, double) const {
    const int d = body->dim();
    const Eigen::Map<const Vector> z(s.data(), d);
    const Vector zz = z;
    const Vector dz = apply_j(grad_degree(*body, zz, degree));
    const Eigen::Map<const Matrix> phi(s.data() + d, d, d);
    const Matrix dphi = apply_j(Matrix(hess_degree(*body, zz, degree) * phi));
    ds.resize(s.size());
    for (int i = 0; i < d; ++i) ds[i] = dz(i);
    std::copy(dphi.data(), dphi.data() + d * d, ds.begin() + d);
  }
};

Vector symplectic_project(const Vector& v, const Vector& e, const Vector& f, double c) {
  // Component of v in the omega-complement of span{e, f}, where omega(e, f) = c.
  const double vf = apply_j(v).dot(f);
  const double ve = apply_j(v).dot(e);
  return v - (vf / c) * e + (ve / c) * f;
}

// Symplectic basis (columns u1, v1, u2, v2, ...) of span{e, f}^omega.
Matrix complement_basis(const Vector& e, const Vector& f) {
  const int d = static_cast<int>(e.size());
  const double c = apply_j(e).dot(f);
  if (std::fabs(c) < 1e-12) throw NumericalError("E = span{gamma', gamma} is not symplectic");
  std::vector<Vector> cand;
  for (int i = 0; i < d; ++i) {
    Vector b = Vector::Zero(d);
    b(i) = 1.0;
    cand.push_back(symplectic_project(b, e, f, c));
  }
  Matrix basis(d, d - 2);
  for (int k = 0; k < (d - 2) / 2; ++k) {
    auto iu = std::max_element(cand.begin(), cand.end(),
                               [](const Vector& x, const Vector& y) { return x.norm() < y.norm(); });
    Vector u = iu->normalized();
    const Vector ju = apply_j(u);
    auto iv = std::max_element(cand.begin(), cand.end(), [&](const Vector& x, const Vector& y) {
      return std::fabs(ju.dot(x)) < std::fabs(ju.dot(y));
    });
    const double w = ju.dot(*iv);
    if (std::fabs(w) < 1e-10) throw NumericalError("symplectic Gram-Schmidt broke down on E^omega");
    Vector v = *iv / w;
    basis.col(2 * k) = u;
    basis.col(2 * k + 1) = v;
    for (auto& x : cand) {
      const Vector jx = apply_j(x);
      x = x - jx.dot(v) * u + jx.dot(u) * v;
    }
  }
  return basis;
}

double flow_distance(const ConvexBody& body, const Vector& z, double t, const IntegratorOptions& opts) {
  return (integrate_reeb(body, z, t, opts) - z).norm();
}

template <class F>
std::pair<double, double> golden_min(const F& f, double lo, double hi, int iters = 60) {
  const double g = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - g * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + g * (b - a); f2 = f(x2);
    }
  }
  return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// min over s of |phi^s(za) - zb|, s in [0, period].
double shift_distance(const ConvexBody& body, const Vector& za, double period, const Vector& zb, double diam,
                      const IntegratorOptions& opts) {
  constexpr int kSamples = 256;
  const double h = period / kSamples;
  Vector x = za;
  double best = (x - zb).norm();
  int best_i = 0;
  for (int i = 1; i < kSamples; ++i) {
    x = integrate_reeb(body, x, h, opts);
    const double dist = (x - zb).norm();
    if (dist < best) {
      best = dist;
      best_i = i;
    }
  }
  if (best > 0.1 * diam) return best;
  auto f = [&](double s) { return (integrate_reeb(body, za, s, opts) - zb).norm(); };
  auto refined = golden_min(f, (best_i - 1) * h, (best_i + 1) * h);
  return std::min(best, refined.second);
}

}  // namespace

ReebTrajectory integrate_reeb_detailed(const ConvexBody& body, const Vector& z, double t,
                                       const IntegratorOptions& opts) {
  if (z.size() != body.dim()) throw InputError("integrate_reeb: point has the wrong dimension");
  if (std::fabs(body.h2(z) - 1.0) > opts.surface_tol)
    throw InputError("integrate_reeb: starting point is not on the surface");
  ReebTrajectory out;
  State s(z.data(), z.data() + z.size());
  auto sys = [&body](const State& x, State& dx, double) {
    const Eigen::Map<const Vector> zz(x.data(), static_cast<Eigen::Index>(x.size()));
    const Vector r = body.reeb_field(zz);
    dx.assign(r.data(), r.data() + r.size());
  };
  auto project = [&](State& x) {
    Eigen::Map<Vector> zz(x.data(), static_cast<Eigen::Index>(x.size()));
    const double v = body.h2(zz);
    out.max_drift = std::max(out.max_drift, std::fabs(v - 1.0));
    zz /= std::sqrt(v);
  };
  out.steps = drive(sys, s, 0.0, t, opts, project);
  out.point = Eigen::Map<Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
  if (out.max_drift > opts.drift_warn)
    out.warnings.push_back("energy drift " + std::to_string(out.max_drift) + " exceeded " +
                           std::to_string(opts.drift_warn) + "; trajectory re-projected");
  return out;
}

Vector integrate_reeb(const ConvexBody& body, const Vector& z, double t, const IntegratorOptions& opts) {
  return integrate_reeb_detailed(body, z, t, opts).point;
}

LinearizedState integrate_linearized(const ConvexBody& body, const Vector& z, double t, double degree,
                                     const IntegratorOptions& opts) {
  if (!(degree > 1.0 && degree <= 2.0)) throw InputError("degree must lie in (1, 2]");
  const int d = body.dim();
  State s = pack(z, Matrix::Identity(d, d));
  drive(VariationalSystem{&body, degree}, s, 0.0, t, opts, [](State&) {});
  return {Eigen::Map<Vector>(s.data(), d), vec_to_mat(s, d)};
}

SymplecticPath linearized_flow_path(const ConvexBody& body, const Vector& z, double total_time, double degree,
                                    int checkpoints, const IntegratorOptions& opts) {
  if (!(degree > 1.0 && degree <= 2.0)) throw InputError("degree must lie in (1, 2]");
  if (checkpoints < 1) throw InputError("need at least one checkpoint");
  const int d = body.dim();
  auto data = std::make_shared<LinearizedData>();
  State s = pack(z, Matrix::Identity(d, d));
  data->points.push_back(z);
  data->phis.push_back(Matrix::Identity(d, d));
  const VariationalSystem sys{&body, degree};
  for (int i = 1; i <= checkpoints; ++i) {
    const double t0 = total_time * (i - 1) / checkpoints;
    const double t1 = total_time * i / checkpoints;
    drive(sys, s, t0, t1, opts, [](State&) {});
    data->points.push_back(Eigen::Map<Vector>(s.data(), d));
    data->phis.push_back(vec_to_mat(s, d));
  }
  auto body_copy = std::make_shared<ConvexBody>(body);
  auto state_at = [data, body_copy, total_time, degree, checkpoints, opts, d](double u) -> LinearizedState {
    const double x = std::clamp(u, 0.0, 1.0) * checkpoints;
    const int i = static_cast<int>(std::lround(x));
    if (std::fabs(x - i) < 1e-12) return {data->points[i], data->phis[i]};
    State st = pack(data->points[i], data->phis[i]);
    drive(VariationalSystem{body_copy.get(), degree}, st, total_time * i / checkpoints, total_time * u, opts,
          [](State&) {});
    return {Eigen::Map<Vector>(st.data(), d), vec_to_mat(st, d)};
  };
  auto eval = [state_at](double u) -> Matrix { return state_at(u).phi; };
  auto deriv = [state_at, body_copy, total_time, degree](double u) -> Matrix {
    const LinearizedState ls = state_at(u);
    return total_time * apply_j(Matrix(hess_degree(*body_copy, ls.point, degree) * ls.phi));
  };
  return SymplecticPath(d, eval, deriv, SymplecticPath::Kind::linearized_flow);
}

std::vector<std::complex<double>> ClosedOrbit::monodromy_eigenvalues() const {
  std::vector<std::complex<double>> out;
  if (monodromy.size() == 0) return out;
  Eigen::EigenSolver<Matrix> es(monodromy, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

ClosedOrbit refine_orbit(const ConvexBody& body, const Vector& z0, double tau0, double tol, int max_iter,
                         const IntegratorOptions& opts) {
  const int d = body.dim();
  Vector z = body.project(z0);
  double tau = tau0;
  const Vector zref = z;
  const Vector rref = body.reeb_field(zref);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= max_iter; ++it) {
    const LinearizedState ls = integrate_linearized(body, z, tau, 2.0, opts);
    const Vector gap = ls.point - z;
    residual = gap.norm();
    if (residual < tol) break;
    if (it == max_iter) break;
    Matrix jac = Matrix::Zero(d + 2, d + 1);
    jac.topLeftCorner(d, d) = ls.phi - Matrix::Identity(d, d);
    jac.block(0, d, d, 1) = body.reeb_field(ls.point);
    jac.block(d, 0, 1, d) = body.grad_h2(z).transpose();
    jac.block(d + 1, 0, 1, d) = rref.transpose();
    Vector rhs(d + 2);
    rhs.head(d) = -gap;
    rhs(d) = -(body.h2(z) - 1.0);
    rhs(d + 1) = -rref.dot(z - zref);
    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vector step = svd.solve(rhs);
    if (!step.allFinite()) throw NumericalError("shooting Newton produced a non-finite step");
    z = body.project(z + step.head(d));
    tau += step(d);
    if (!(tau > 0)) throw NumericalError("shooting Newton drove the period to zero");
  }
  if (!(residual < tol))
    throw NumericalError("shooting Newton did not converge: residual " + std::to_string(residual));
  ClosedOrbit orbit;
  orbit.initial_point = z;
  orbit.period = tau;
  orbit.residual = residual;
  return orbit;
}

ClosedOrbit monodromy_and_index(const ConvexBody& body, ClosedOrbit orbit, double alpha, const CzOptions& cz_opts,
                                const IntegratorOptions& opts) {
  const ConvexBody hb = body.homogenize(alpha);
  const int d = body.dim();
  const int n = body.n();
  const Vector z = orbit.initial_point;
  const double tau = orbit.period;

  orbit.monodromy = integrate_linearized(body, z, tau, 2.0, opts).phi;
  orbit.symplectic_defect = symplectic_defect(orbit.monodromy);

  const SymplecticPath gamma = linearized_flow_path(hb, z, 2.0 * tau / alpha, alpha, cz_opts.grid, opts);
  const Matrix g1 = gamma(1.0);
  orbit.cz = conley_zehnder(gamma, cz_opts).index;
  orbit.morse = orbit.cz - n;
  orbit.nullity_direct = kernel_dimension(g1, cz_opts.tol_ker).nullity;

  const Vector e = body.reeb_field(z);
  Matrix p(d, d);
  p.col(0) = e;
  p.col(1) = z;
  if (d > 2) p.rightCols(d - 2) = complement_basis(e, z);
  const Matrix blocks = p.inverse() * g1 * p;
  Matrix m_alpha(2, 2);
  m_alpha << 1.0, (alpha - 2.0) * tau, 0.0, 1.0;
  double res = (blocks.topLeftCorner(2, 2) - m_alpha).cwiseAbs().maxCoeff();
  if (d > 2) {
    res = std::max(res, blocks.topRightCorner(2, d - 2).cwiseAbs().maxCoeff());
    res = std::max(res, blocks.bottomLeftCorner(d - 2, 2).cwiseAbs().maxCoeff());
    orbit.return_block = blocks.bottomRightCorner(d - 2, d - 2);
    orbit.nullity = 1 + kernel_dimension(orbit.return_block, cz_opts.tol_ker).nullity;
  } else {
    orbit.return_block = Matrix(0, 0);
    orbit.nullity = 1;
  }
  orbit.block_residual = res;
  orbit.block_flag = res > 1e-6;
  orbit.alpha = alpha;
  orbit.indices_filled = true;
  return orbit;
}

OrbitSearchResult find_closed_orbits(const ConvexBody& body, const OrbitSearchOptions& opts) {
  if (!(opts.t_max > 0)) throw InputError("t_max must be positive");
  const int d = body.dim();
  std::vector<Vector> seeds;
  if (opts.plane_seeds)
    for (int h = 0; h < body.n(); ++h) {
      Vector e = Vector::Zero(d);
      e(2 * h) = 1.0;
      seeds.push_back(body.project(e));
    }
  for (const Vector& u : sobol_sphere_points(d, opts.sobol_seeds)) seeds.push_back(body.project(u));

  const double diam = body.diameter();
  const double tol = opts.tol_orbit * std::max(1.0, diam);
  const int samples = std::max(16, static_cast<int>(std::ceil(opts.t_max * opts.samples_per_unit_time)));
  const double dt = opts.t_max / samples;

  std::vector<std::vector<ClosedOrbit>> per_seed(seeds.size());
  std::vector<std::string> logs(seeds.size());

#pragma omp parallel for schedule(dynamic) if (opts.execution == Execution::parallel)
  for (int s = 0; s < static_cast<int>(seeds.size()); ++s) {
    try {
      const Vector z0 = seeds[s];
      std::vector<double> dist(samples + 1);
      Vector x = z0;
      dist[0] = 0.0;
      for (int i = 1; i <= samples; ++i) {
        x = integrate_reeb(body, x, dt, opts.integrator);
        dist[i] = (x - z0).norm();
      }
      std::vector<double> found_periods;
      for (int i = 1; i <= samples; ++i) {
        const bool local_min = dist[i] <= dist[i - 1] && (i == samples || dist[i] <= dist[i + 1]);
        if (!local_min || dist[i] > 0.05 * diam) continue;
        const double tc = i * dt;
        bool multiple = false;
        for (double p : found_periods) {
          const double k = std::round(tc / p);
          if (k >= 1 && std::fabs(tc - k * p) < 2 * dt) multiple = true;
        }
        if (multiple) continue;
        try {
          ClosedOrbit orbit = refine_orbit(body, z0, tc, tol, opts.newton_max_iter, opts.integrator);
          for (int k = 10; k >= 2; --k) {
            const double sub = orbit.period / k;
            if (flow_distance(body, orbit.initial_point, sub, opts.integrator) > 1e-4 * diam) continue;
            try {
              orbit = refine_orbit(body, orbit.initial_point, sub, tol, opts.newton_max_iter, opts.integrator);
              break;
            } catch (const NumericalError&) {
            }
          }
          if (orbit.period <= opts.t_max * (1 + 1e-9) + 2 * dt) {
            found_periods.push_back(orbit.period);
            per_seed[s].push_back(orbit);
          }
        } catch (const NumericalError& err) {
          logs[s] += "seed " + std::to_string(s) + " candidate " + std::to_string(tc) + ": " + err.what() + "; ";
        }
      }
    } catch (const std::exception& err) {
      logs[s] += "seed " + std::to_string(s) + ": " + err.what();
    }
  }

  OrbitSearchResult result;
  result.seeds = static_cast<int>(seeds.size());
  for (auto& l : logs)
    if (!l.empty()) result.log.push_back(l);
  std::vector<ClosedOrbit> all;
  for (auto& v : per_seed)
    for (auto& o : v) all.push_back(std::move(o));
  std::stable_sort(all.begin(), all.end(), [](const ClosedOrbit& a, const ClosedOrbit& b) { return a.period < b.period; });
  for (const auto& o : all) {
    if (o.period > opts.t_max * (1 + 1e-9)) continue;
    bool duplicate = false;
    for (const auto& kept : result.orbits) {
      if (std::fabs(kept.period - o.period) > 1e-6 * kept.period) continue;
      if (shift_distance(body, kept.initial_point, kept.period, o.initial_point, diam, opts.integrator) < opts.dedup_tol) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    result.orbits.push_back(o);
    std::vector<double> mult;
    for (int k = 1; k * o.period <= opts.t_max * (1 + 1e-9); ++k) mult.push_back(k * o.period);
    result.multiples.push_back(std::move(mult));
  }
  return result;
}

BesseTestResult numerical_besse_test(const ConvexBody& body, double tau, int samples, Execution exec, double tol_rel,
                                     const IntegratorOptions& opts) {
  if (!(tau > 0)) throw InputError("tau must be positive");
  if (samples < 1) throw InputError("need at least one sample");
  BesseTestResult r;
  r.tau = tau;
  r.samples = samples;
  r.tolerance = tol_rel * body.diameter();
  const auto dirs = sobol_sphere_points(body.dim(), samples);
  std::vector<double> disp(samples);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (int i = 0; i < samples; ++i) {
    const Vector z = body.project(dirs[i]);
    disp[i] = (integrate_reeb(body, z, tau, opts) - z).norm();
  }
  const auto worst = std::max_element(disp.begin(), disp.end());
  r.max_displacement = *worst;
  r.witness = body.project(dirs[worst - disp.begin()]);
  r.besse = r.max_displacement < r.tolerance;
  return r;
}

}  // namespace reeb
