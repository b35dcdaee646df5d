#include "reeb/conley_zehnder.hpp"

#include "reeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace reeb {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kNearMiss = 1e-4;

double scale_of(const Matrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

double sigma_min(const Matrix& gamma) {
  const Matrix a = gamma - Matrix::Identity(gamma.rows(), gamma.cols());
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// log |det(gamma - I)|, with a logarithmic dip at every crossing.
double log_det(const Matrix& gamma) {
  const Matrix a = gamma - Matrix::Identity(gamma.rows(), gamma.cols());
  Eigen::JacobiSVD<Matrix> svd(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    sum += std::log(std::max(svd.singularValues()(i), 1e-300));
  return sum;
}

// Signature of the symmetric part of a form, and whether it is non-degenerate
// at the given tolerance.
std::pair<int, bool> signature(const Matrix& form, double tol) {
  const Matrix sym = 0.5 * (form + form.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  int sig = 0;
  bool regular = true;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (std::fabs(l) <= tol) regular = false;
    sig += l > 0 ? 1 : (l < 0 ? -1 : 0);
  }
  return {sig, regular};
}

double form_tolerance(const Matrix& derivative) { return 1e-6 * std::max(1.0, derivative.cwiseAbs().maxCoeff()); }

struct Refined {
  double t;
  double value;
};

template <class F>
Refined golden_minimize(const F& f, double lo, double hi) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  Refined best{a, f(a)};
  const double fb = f(b);
  if (fb < best.value) best = {b, fb};
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kGolden * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kGolden * (b - a); f2 = f(x2);
    }
  }
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

struct Scan {
  std::vector<CrossingRecord> crossings;
  std::vector<bool> regular;
  std::vector<double> spacing;
  bool suspicious = false;
};

constexpr int kSubcells = 64;
constexpr int kMaxRefineDepth = 12;

// Crossings in [lo, hi] sampled on `cells` cells. A crossing with more small
// singular values than its kernel dimension is re-scanned on a finer subgrid.
void scan_interval(const SymplecticPath& path, const CzOptions& opts, double lo, double hi, int cells, int depth,
                   Scan& scan) {
  const int dim = path.dim();
  const Matrix j = standard_J(dim / 2);
  const double h = (hi - lo) / cells;
  const bool top = depth == 0;
  std::vector<double> f(cells + 1), phi(cells + 1), tol(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    const double t = lo + i * h;
    const Matrix g = path(t);
    f[i] = sigma_min(g);
    phi[i] = log_det(g);
    tol[i] = opts.tol_ker * scale_of(g);
  }
  for (int i = top ? 1 : 0; i < cells; ++i)
    if (f[i] < tol[i] && f[i + 1] < tol[i + 1] && (!top || i + 1 < cells))
      throw UnresolvedCrossing(lo + i * h, lo + (i + 1) * h, "non-isolated crossing");

  std::vector<Refined> found;
  auto phi_of = [&](double t) { return log_det(path(t)); };
  for (int i = top ? 1 : 0; i <= cells; ++i) {
    bool local_min;
    if (i == 0) {
      local_min = phi[0] <= phi[1];
    } else if (i == cells) {
      local_min = phi[i] < phi[i - 1] || (!top && phi[i] == phi[i - 1]);
    } else {
      local_min = phi[i] <= phi[i - 1] && phi[i] <= phi[i + 1] &&
                  !(phi[i] == phi[i - 1] && phi[i] == phi[i + 1] && f[i] > tol[i]);
    }
    if (!local_min) continue;
    const double a = lo + std::max(i - 1, 0) * h;
    const double b = lo + std::min(i + 1, cells) * h;
    Refined r{lo + i * h, 0.0};
    if (f[i] != 0.0) r.t = golden_minimize(phi_of, a, b).t;
    if (r.t < 1e-10 || r.t > 1.0 - 1e-10) continue;
    const Matrix g = path(r.t);
    r.value = sigma_min(g);
    const double tk = opts.tol_ker * scale_of(g);
    if (r.value >= tk) {
      // Shallow minimum: re-scan the neighbourhood on a finer grid.
      const double near = 2.0 * h * path.derivative(r.t).norm();
      if (r.value < near && depth < kMaxRefineDepth && near > 100.0 * tk) {
        const double c = lo + i * h;
        scan_interval(path, opts, std::max(0.0, c - 4.0 * h), std::min(1.0, c + 4.0 * h), kSubcells, depth + 1, scan);
      } else if (r.value < kNearMiss) {
        scan.suspicious = true;
      }
      continue;
    }
    found.push_back(r);
  }
  std::sort(found.begin(), found.end(), [](const Refined& x, const Refined& y) { return x.t < y.t; });
  double last = -1.0;
  for (const auto& fr : found) {
    if (fr.t - last < 1e-9) continue;
    last = fr.t;
    const double t = fr.t;
    const Matrix g = path(t);
    const Matrix a = g - Matrix::Identity(dim, dim);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const double tk = opts.tol_ker * scale_of(g);
    const Matrix d = path.derivative(t);
    const double near = 2.0 * h * d.norm();
    int kdim = 0, small = 0;
    for (Eigen::Index s = 0; s < svd.singularValues().size(); ++s) {
      if (svd.singularValues()(s) < tk) ++kdim;
      if (svd.singularValues()(s) < near) ++small;
    }
    if (kdim == 0) continue;
    if (small > kdim) {
      if (depth < kMaxRefineDepth && near > 100.0 * tk) {
        scan_interval(path, opts, std::max(0.0, t - 4.0 * h), std::min(1.0, t + 4.0 * h), kSubcells, depth + 1, scan);
        continue;
      }
      scan.suspicious = true;
    }
    const Matrix v = svd.matrixV().rightCols(kdim);
    const Matrix form = -v.transpose() * j * d * v;
    auto [sig, regular] = signature(form, form_tolerance(d));
    scan.crossings.push_back({t, kdim, sig});
    scan.regular.push_back(regular);
    scan.spacing.push_back(h);
  }
}

Scan scan_interior(const SymplecticPath& path, const CzOptions& opts, int grid) {
  Scan scan;
  scan_interval(path, opts, 0.0, 1.0, grid, 0, scan);
  std::vector<std::size_t> order(scan.crossings.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scan.crossings[a].time < scan.crossings[b].time; });
  Scan sorted;
  sorted.suspicious = scan.suspicious;
  for (std::size_t k : order) {
    const auto& c = scan.crossings[k];
    if (!sorted.crossings.empty()) {
      const double gap = c.time - sorted.crossings.back().time;
      if (gap < 1e-9) continue;
      if (gap < 3.0 * std::min(scan.spacing[k], sorted.spacing.back())) sorted.suspicious = true;
    }
    sorted.crossings.push_back(c);
    sorted.regular.push_back(scan.regular[k]);
    sorted.spacing.push_back(scan.spacing[k]);
  }
  return sorted;
}

bool same_crossings(const std::vector<CrossingRecord>& a, const std::vector<CrossingRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kernel_dim != b[i].kernel_dim || a[i].signature_contribution != b[i].signature_contribution ||
        std::fabs(a[i].time - b[i].time) > 1e-7)
      return false;
  return true;
}

Scan stable_scan(const SymplecticPath& path, const CzOptions& opts) {
  int grid = std::max(opts.grid, 16);
  Scan scan = scan_interior(path, opts, grid);
  for (int d = 0; d < opts.max_grid_doublings && scan.suspicious; ++d) {
    grid *= 2;
    Scan finer = scan_interior(path, opts, grid);
    const bool agree = same_crossings(scan.crossings, finer.crossings);
    scan = std::move(finer);
    if (agree) {
      scan.suspicious = false;
      break;
    }
  }
  return scan;
}

// Index of a path whose start, interior crossings, and endpoint are all
// regular; nullopt otherwise.
std::optional<CzResult> regular_index(const SymplecticPath& path, const CzOptions& opts) {
  const int dim = path.dim();
  const Matrix j = standard_J(dim / 2);
  const Matrix g1 = path(1.0);
  if (sigma_min(g1) < opts.tol_ker * scale_of(g1)) return std::nullopt;
  const Matrix d0 = path.derivative(0.0);
  auto [sig0, regular0] = signature(-j * d0, form_tolerance(d0));
  if (!regular0) return std::nullopt;
  Scan scan;
  try {
    scan = stable_scan(path, opts);
  } catch (const UnresolvedCrossing&) {
    return std::nullopt;
  }
  if (std::find(scan.regular.begin(), scan.regular.end(), false) != scan.regular.end()) return std::nullopt;
  CzResult r;
  r.start_signature = sig0;
  r.index = sig0 / 2;
  for (const auto& c : scan.crossings) r.index += c.signature_contribution;
  r.crossings = std::move(scan.crossings);
  return r;
}

Matrix negative_rotation(int n, double angle) {
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  const Eigen::Matrix2d b = rotation_block(-angle / (2.0 * std::numbers::pi));
  for (int h = 0; h < n; ++h) m.block<2, 2>(2 * h, 2 * h) = b;
  return m;
}

}  // namespace

SymplecticPath negative_rotation_perturbation(const SymplecticPath& path, double eps) {
  const int n = path.n();
  const Matrix j = standard_J(n);
  auto eval = [path, eps, n](double t) -> Matrix { return negative_rotation(n, eps * t) * path(t); };
  auto deriv = [path, eps, n, j](double t) -> Matrix {
    const Matrix r = negative_rotation(n, eps * t);
    return -eps * j * r * path(t) + r * path.derivative(t);
  };
  return SymplecticPath(path.dim(), eval, deriv, SymplecticPath::Kind::composite);
}

std::vector<CrossingRecord> interior_crossings(const SymplecticPath& path, const CzOptions& opts) {
  return stable_scan(path, opts).crossings;
}

CzResult conley_zehnder(const SymplecticPath& path, const CzOptions& opts) {
  if (auto r = regular_index(path, opts)) return *r;
  std::optional<int> previous;
  for (double eps : opts.eps_sequence) {
    auto r = regular_index(negative_rotation_perturbation(path, eps), opts);
    if (!r) {
      previous.reset();
      continue;
    }
    if (previous && *previous == r->index) {
      r->degenerate = true;
      r->eps_used = eps;
      return *r;
    }
    previous = r->index;
  }
  throw NumericalError("conley_zehnder: lower semicontinuous limit did not stabilize over the eps sequence");
}

int cz_index(const SymplecticPath& path, const CzOptions& opts) { return conley_zehnder(path, opts).index; }

int morse_index_from_path(const SymplecticPath& path, const CzOptions& opts) {
  int total = 0;
  for (const auto& c : interior_crossings(path, opts)) total += c.kernel_dim;
  return total;
}

NullityResult kernel_dimension(const Matrix& m, double tol_ker) {
  const Matrix a = m - Matrix::Identity(m.rows(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(a);
  const double tol = tol_ker * scale_of(m);
  NullityResult r;
  r.smallest_nonzero = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s < tol) {
      ++r.nullity;
    } else {
      r.smallest_nonzero = std::min(r.smallest_nonzero, s);
      if (s < kNearMiss) r.borderline = true;
    }
  }
  return r;
}

NullityResult cz_nullity(const SymplecticPath& path, double tol_ker) { return kernel_dimension(path(1.0), tol_ker); }

int parity(const SymplecticMatrix& sm, double tol) {
  const int n = sm.n();
  auto classify = [n, tol](const Matrix& m) -> std::optional<int> {
    Eigen::EigenSolver<Matrix> es(m, false);
    std::complex<double> det(1.0, 0.0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const auto l = es.eigenvalues()(i);
      if (std::abs(l - 1.0) < tol) return std::nullopt;
      det *= (l - 1.0);
    }
    return (n + (det.real() < 0 ? 1 : 0)) % 2;
  };
  if (auto p = classify(sm.matrix())) return *p;
  std::optional<int> previous;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    auto p = classify(negative_rotation(n, eps) * sm.matrix());
    if (!p) throw NumericalError("parity: eigenvalue classification ambiguous near 1");
    if (previous && *previous == *p) return *p;
    previous = p;
  }
  throw NumericalError("parity: classification did not stabilize");
}

}  // namespace reeb
