#include "reeb/geodesic_bott.hpp"

#include "reeb/errors.hpp"

#include <algorithm>
#include <cctype>

namespace reeb {

std::string to_string(CrossFamily f) {
  switch (f) {
    case CrossFamily::sphere: return "S";
    case CrossFamily::real_projective: return "RP";
    case CrossFamily::complex_projective: return "CP";
    case CrossFamily::quaternionic_projective: return "HP";
    case CrossFamily::cayley_plane: return "CaP";
  }
  return "?";
}

CrossFamily parse_cross_family(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "s" || s == "sphere") return CrossFamily::sphere;
  if (s == "rp" || s == "real-projective") return CrossFamily::real_projective;
  if (s == "cp" || s == "complex-projective") return CrossFamily::complex_projective;
  if (s == "hp" || s == "quaternionic-projective") return CrossFamily::quaternionic_projective;
  if (s == "cap" || s == "cayley" || s == "cayley-plane") return CrossFamily::cayley_plane;
  throw InputError("unknown model family '" + text + "'");
}

CrossModel::CrossModel(CrossFamily family, int n) : family_(family), n_(n) {
  if (n < 2) throw InputError("model dimension must be at least 2");
  switch (family) {
    case CrossFamily::complex_projective:
      if (n % 2 != 0) throw InputError("CP^{n/2} needs n even");
      break;
    case CrossFamily::quaternionic_projective:
      if (n % 4 != 0) throw InputError("HP^{n/4} needs n divisible by 4");
      break;
    case CrossFamily::cayley_plane:
      if (n != 16) throw InputError("CaP^2 needs n = 16");
      break;
    default: break;
  }
}

int CrossModel::initial_index() const {
  switch (family_) {
    case CrossFamily::sphere: return n_ - 1;
    case CrossFamily::real_projective: return 0;
    case CrossFamily::complex_projective: return 1;
    case CrossFamily::quaternionic_projective: return 3;
    case CrossFamily::cayley_plane: return 7;
  }
  return 0;
}

bool CrossModel::spin() const {
  if (family_ == CrossFamily::real_projective) return false;
  if (family_ == CrossFamily::complex_projective) return (n_ / 2) % 2 == 1;
  return true;
}

std::string CrossModel::name() const {
  switch (family_) {
    case CrossFamily::sphere: return "S^" + std::to_string(n_);
    case CrossFamily::real_projective: return "RP^" + std::to_string(n_);
    case CrossFamily::complex_projective: return "CP^" + std::to_string(n_ / 2);
    case CrossFamily::quaternionic_projective: return "HP^" + std::to_string(n_ / 4);
    case CrossFamily::cayley_plane: return "CaP^2";
  }
  return "?";
}

BottIndex bott_indices(const CrossModel& model, int m) {
  if (m < 1) throw InputError("iterate m must be at least 1");
  const std::int64_t n = model.n();
  return {m * static_cast<std::int64_t>(model.initial_index()) + (m - 1) * (n - 1), 2 * n - 1};
}

ClassDegrees class_degrees(const CrossModel& model, int m) {
  const std::int64_t a = bott_indices(model, m).index;
  return {a, a + 2 * (model.n() - 1)};
}

std::vector<ZollValue> zoll_spectral_values(const CrossModel&, double ell, int m_max) {
  if (!(ell > 0.0)) throw InputError("minimal period must be positive");
  if (m_max < 1) throw InputError("m_max must be at least 1");
  std::vector<ZollValue> out;
  for (int m = 1; m <= m_max; ++m) out.push_back({m, m * ell, m * ell});
  return out;
}

std::vector<std::int64_t> sphere_quotient_betti(int n) {
  if (n < 2) throw InputError("sphere dimension must be at least 2");
  const int dim = 2 * (n - 1);
  std::vector<std::int64_t> b(static_cast<std::size_t>(dim + 1), 0);
  for (int k = 0; k <= dim; k += 2) b[static_cast<std::size_t>(k)] = 1;
  if ((n - 1) % 2 == 0) b[static_cast<std::size_t>(n - 1)] += 1;
  return b;
}

std::int64_t cohomology_rank(const CrossModel& model, int degree, const std::vector<std::int64_t>& quotient_betti) {
  const std::int64_t i = model.initial_index();
  const std::int64_t step = i + model.n() - 1;
  std::int64_t rank = 0;
  for (std::int64_t m = 1;; ++m) {
    const std::int64_t shift = degree - (m * i + (m - 1) * (model.n() - 1));
    if (shift < 0) break;
    if (shift < static_cast<std::int64_t>(quotient_betti.size())) rank += quotient_betti[static_cast<std::size_t>(shift)];
    if (step == 0) break;
  }
  return rank;
}

std::vector<BottRow> bott_table(const CrossModel& model, int m_max, double ell) {
  if (m_max < 1) throw InputError("m_max must be at least 1");
  std::vector<BottRow> rows;
  for (int m = 1; m <= m_max; ++m) rows.push_back({m, bott_indices(model, m), class_degrees(model, m), m * ell});
  return rows;
}

}  // namespace reeb
