#pragma once

#include "reeb/convex_body.hpp"
#include "reeb/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace reeb {

inline constexpr double kTolEq = 1e-9;

/// c_i = c_{i+n-1} at i: tau = c_i and mu = 2 i + n.
struct InvariantHit {
  std::int64_t i = 0;
  Action tau;
  std::int64_t mu = 0;
  bool exact = false;  // decided by rational equality
};

/// Every i with c_i = c_{i+n-1}; exact when both values are rational,
/// otherwise within tol_eq relative.
std::vector<InvariantHit> besse_by_invariants(const std::vector<Action>& c, int n, double tol_eq = kTolEq);

/// A hit at i = 0 (c_0 = c_{n-1}) characterizes Zoll spheres.
bool zoll_by_invariants(const std::vector<Action>& c, int n, double tol_eq = kTolEq);

struct SpectrumCoverage {
  bool attested = false;  // the caller vouches the list contains sigma(Sigma) on (0, bound]
  double bound = 0.0;
  std::string source;     // e.g. "exact ellipsoid spectrum"
};

struct PinchingCertificate {
  enum class Verdict { certified, refused, not_applicable };
  Verdict verdict = Verdict::not_applicable;
  std::string tag = "pinching criterion";
  double r = 0.0, R = 0.0, delta = 0.0;
  double systole = 0.0;
  double interval_hi = 0.0;                 // delta^2 sys
  std::vector<Action> witnesses;            // spectrum values inside (sys, delta^2 sys)
  // Chain c_{n-1} <= pi R^2 < delta^2 pi r^2 <= delta^2 sys.
  std::optional<double> c_n_minus_1;
  double pi_R2 = 0.0, delta2_pi_r2 = 0.0, delta2_sys = 0.0;
  bool chain_first = true;   // c_{n-1} <= pi R^2 (vacuous without invariants)
  bool chain_second = false;  // pi R^2 < delta^2 pi r^2
  bool chain_third = false;   // delta^2 pi r^2 <= delta^2 sys
  double tol = kTolEq;
  std::string reason;
};

std::string to_string(PinchingCertificate::Verdict v);

/// Zoll certificate for a body between balls of radii r <= R with R / r <
/// delta <= sqrt 2: certified iff no spectrum value lies in the open interval
/// (sys, delta^2 sys). Needs an attested spectrum covering (0, delta^2 sys].
PinchingCertificate zoll_by_pinching(double r, double R, const std::vector<Action>& spectrum,
                                     const SpectrumCoverage& coverage, double delta = 1.4142135623730951,
                                     const std::vector<Action>& invariants = {}, int n = 0);
PinchingCertificate zoll_by_pinching(const ConvexBody& body, const std::vector<Action>& spectrum,
                                     const SpectrumCoverage& coverage, double delta = 1.4142135623730951,
                                     const std::vector<Action>& invariants = {});

struct SufficientVerdict {
  bool refused = false;      // attestation missing
  bool besse = false;
  bool degenerate = false;   // n = 1: c_i = c_{i+0} holds trivially
  std::string tag;
  std::vector<InvariantHit> hits;
  std::string note;
};

/// Sufficient Besse condition on capacity values: any hit c_i = c_{i+n-1}
/// implies Besse (no converse is claimed). Refuses without the discreteness
/// attestation.
SufficientVerdict besse_sufficient_eh(const std::vector<Action>& c, int n, bool spectrum_discrete_attested,
                                      double tol_eq = kTolEq);

}  // namespace reeb
