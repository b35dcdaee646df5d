#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace reeb {

enum class CrossFamily { sphere, real_projective, complex_projective, quaternionic_projective, cayley_plane };

std::string to_string(CrossFamily f);
/// Accepts "S", "RP", "CP", "HP", "CaP" (case-insensitive) and the long names.
CrossFamily parse_cross_family(const std::string& text);

/// A compact rank-one symmetric space model of real dimension n.
class CrossModel {
 public:
  /// Throws InputError on an invalid family/dimension pair: CP needs n even,
  /// HP needs n divisible by 4, CaP needs n = 16, and n >= 2 throughout.
  CrossModel(CrossFamily family, int n);

  CrossFamily family() const { return family_; }
  int n() const { return n_; }
  /// i(M): n - 1 for S^n, 1 for CP, 3 for HP, 7 for CaP^2 and 0 for RP^n
  /// (its shortest closed geodesics are non-contractible minima).
  int initial_index() const;
  bool simply_connected() const { return family_ != CrossFamily::real_projective; }
  /// Spin except CP^{n/2} with n/2 even; RP^n is not simply connected and
  /// reports false.
  bool spin() const;
  std::string name() const;

 private:
  CrossFamily family_;
  int n_;
};

struct BottIndex {
  std::int64_t index = 0;
  std::int64_t nullity = 0;
};

/// ind(K^m) = m i(M) + (m - 1)(n - 1), nul(K^m) = 2n - 1.
BottIndex bott_indices(const CrossModel& model, int m);

struct ClassDegrees {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;  // alpha + 2(n - 1)
};
ClassDegrees class_degrees(const CrossModel& model, int m);

struct ZollValue {
  int m = 0;
  double alpha = 0.0;  // c(alpha_m) = m ell
  double beta = 0.0;   // c(beta_m) = m ell
};
std::vector<ZollValue> zoll_spectral_values(const CrossModel& model, double ell, int m_max);

/// Betti numbers of SM/S^1 for the round S^n, the oriented Grassmannian of
/// 2-planes in R^{n+1}: the complex quadric of dimension n - 1 (ones in even
/// degrees 0..2n-2, plus one more in degree n - 1 when n is odd).
std::vector<std::int64_t> sphere_quotient_betti(int n);

/// rank H^d_{S^1}(Lambda M, M) = sum_{m >= 1} b_{d - m i(M) - (m - 1)(n - 1)}.
std::int64_t cohomology_rank(const CrossModel& model, int degree, const std::vector<std::int64_t>& quotient_betti);

struct BottRow {
  int m = 0;
  BottIndex bott;
  ClassDegrees degrees;
  double action = 0.0;  // m ell
};
std::vector<BottRow> bott_table(const CrossModel& model, int m_max, double ell);

}  // namespace reeb
