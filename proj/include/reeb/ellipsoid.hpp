#pragma once

#include "reeb/rational.hpp"
#include "reeb/symplectic.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace reeb {

enum class Arithmetic { exact, floating };

/// E(a) = { z : sum_h |z_h|^2 / a_h = 1/pi } with 0 < a_1 <= ... <= a_n.
/// Parameters are sorted on construction.
class Ellipsoid {
 public:
  static Ellipsoid exact(std::vector<Rational> a);
  static Ellipsoid floating(std::vector<double> a);
  /// Parses each token as a rational literal ("2", "3/2", "1.25"); `force_float`
  /// keeps only the double values.
  static Ellipsoid parse(const std::vector<std::string>& tokens, bool force_float = false);

  std::size_t n() const { return values_.size(); }
  Arithmetic mode() const { return exact_ ? Arithmetic::exact : Arithmetic::floating; }
  bool is_exact() const { return exact_.has_value(); }
  const std::vector<double>& params() const { return values_; }
  /// Throws InputError in floating mode.
  const std::vector<Rational>& exact_params() const;
  Action param(std::size_t h) const;

  /// E(s a): the image of E(a) under z -> sqrt(s) z.
  Ellipsoid scaled(const Rational& s) const;
  Ellipsoid scaled(double s) const;

 private:
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
};

struct SpectrumEntry {
  Action tau;
  int multiplicity = 0;       // #{h : tau / a_h is a positive integer}
  std::int64_t morse_index = 0;  // 2 sum_h (ceil(tau / a_h) - 1)
  std::int64_t nullity = 0;      // 2 m - 1
  std::int64_t cz_index = 0;     // morse_index + n
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;
  std::vector<std::string> warnings;
  Arithmetic mode = Arithmetic::exact;
  double tol_merge = 0.0;  // relative tolerance used in floating mode
};

inline constexpr double kTolMerge = 1e-9;

/// Closed-form Reeb flow: z_h -> e^{2 pi J t / a_h} z_h. Throws InputError if z
/// is off the surface by more than 1e-12.
Vector reeb_flow(const Ellipsoid& e, const Vector& z, double t);

/// Residual sum_h |z_h|^2 / a_h - 1/pi.
double surface_residual(const Ellipsoid& e, const Vector& z);

/// All distinct k a_h <= max_action with multiplicities and index data.
Spectrum action_spectrum(const Ellipsoid& e, const Action& max_action);
Spectrum action_spectrum(const Ellipsoid& e, double max_action);

/// c_0, ..., c_{count-1}: tau_1 repeated m_1 times, tau_2 repeated m_2 times, ...
std::vector<Action> spectral_invariants(const Ellipsoid& e, std::size_t count);

/// Expands spectrum entries into the invariant sequence (at most `count` values).
std::vector<Action> invariants_from_spectrum(const std::vector<SpectrumEntry>& entries, std::size_t count);

struct Classification {
  enum class Verdict { zoll, besse, not_besse };
  Verdict verdict = Verdict::not_besse;
  std::optional<Action> minimal_period;  // lcm of the parameters when Besse
  bool heuristic = false;                // floating mode: decided by rational reconstruction
  std::int64_t denominator_bound = 0;
  std::vector<RationalCertificate> ratio_certificates;  // a_h / a_1, floating mode only
  std::string note;
};

std::string to_string(Classification::Verdict v);

Classification classify(const Ellipsoid& e);

/// mu = 2 sum_h tau / a_h - n for a common period tau. Throws InputError if
/// tau is not a common period.
std::int64_t besse_cz_index(const Ellipsoid& e, const Action& tau);

struct InterleavingReport {
  std::int64_t mu = 0;
  std::int64_t i = 0;  // (mu - n) / 2
  Action c_before, c_i, c_last, c_after;  // c_{i-1}, c_i, c_{i+n-1}, c_{i+n}
  bool before_strict = false;   // c_{i-1} < tau
  bool tau_is_c_i = false;      // tau = c_i
  bool equality = false;        // c_i = c_{i+n-1}
  bool after_strict = false;    // c_{i+n-1} < c_{i+n}
  bool all() const { return before_strict && tau_is_c_i && equality && after_strict; }
};

/// Checks c_{i-1} < tau = c_i = c_{i+n-1} < c_{i+n} with i = (mu - n) / 2 and
/// c_{-1} := 0.
InterleavingReport verify_interleaving(const Ellipsoid& e, const Action& tau);

/// Linearized degree-2 flow along a tau-periodic orbit: block rotations with
/// rates tau / a_h.
SymplecticPath ellipsoid_rotation_path(const Ellipsoid& e, double tau);

}  // namespace reeb
