#include "reeb/certifier.hpp"

#include "reeb/errors.hpp"

#include <cmath>
#include <numbers>

namespace reeb {

std::vector<InvariantHit> besse_by_invariants(const std::vector<Action>& c, int n, double tol_eq) {
  if (n < 1) throw InputError("besse_by_invariants: n must be positive");
  std::vector<InvariantHit> hits;
  const std::size_t span = static_cast<std::size_t>(n - 1);
  for (std::size_t i = 0; i + span < c.size(); ++i) {
    if (!same_action(c[i], c[i + span], tol_eq)) continue;
    InvariantHit hit;
    hit.i = static_cast<std::int64_t>(i);
    hit.tau = c[i];
    hit.mu = 2 * hit.i + n;
    hit.exact = c[i].is_exact() && c[i + span].is_exact();
    hits.push_back(hit);
  }
  return hits;
}

bool zoll_by_invariants(const std::vector<Action>& c, int n, double tol_eq) {
  if (n < 1) throw InputError("zoll_by_invariants: n must be positive");
  if (c.size() < static_cast<std::size_t>(n)) throw InputError("zoll_by_invariants: need at least n invariants");
  return same_action(c[0], c[static_cast<std::size_t>(n - 1)], tol_eq);
}

std::string to_string(PinchingCertificate::Verdict v) {
  switch (v) {
    case PinchingCertificate::Verdict::certified: return "certified";
    case PinchingCertificate::Verdict::refused: return "refused";
    case PinchingCertificate::Verdict::not_applicable: return "not-applicable";
  }
  return "unknown";
}

PinchingCertificate zoll_by_pinching(double r, double R, const std::vector<Action>& spectrum,
                                     const SpectrumCoverage& coverage, double delta,
                                     const std::vector<Action>& invariants, int n) {
  if (!(r > 0.0) || !(R >= r) || !std::isfinite(R)) throw InputError("zoll_by_pinching: need 0 < r <= R");
  PinchingCertificate cert;
  cert.r = r;
  cert.R = R;
  cert.delta = delta;
  const double tol = cert.tol;

  if (!(delta > 1.0) || delta > std::numbers::sqrt2 * (1.0 + 1e-15)) {
    cert.verdict = PinchingCertificate::Verdict::not_applicable;
    cert.reason = "delta must lie in (1, sqrt 2]";
    return cert;
  }
  if (R / r >= delta) {
    cert.verdict = PinchingCertificate::Verdict::not_applicable;
    cert.reason = "R / r = " + std::to_string(R / r) + " is not below delta";
    return cert;
  }

  cert.verdict = PinchingCertificate::Verdict::refused;
  if (!coverage.attested) {
    cert.reason = "spectrum coverage not attested";
    return cert;
  }
  if (spectrum.empty()) {
    cert.reason = "empty spectrum";
    return cert;
  }

  Action sys = spectrum.front();
  for (const auto& v : spectrum) {
    if (!(v.value > 0.0)) throw InputError("zoll_by_pinching: spectrum values must be positive");
    if (action_less(v, sys, 0.0)) sys = v;
  }
  // delta^2 snapped to a nearby small-denominator rational, so sqrt 2 gives 2.
  const auto d2_rational = rational_reconstruction(delta * delta, 1'000'000, 8.0 * 2.220446049250313e-16).value;
  const double d2 = d2_rational ? to_double(*d2_rational) : delta * delta;
  cert.systole = sys.value;
  cert.interval_hi = d2 * sys.value;
  if (coverage.bound < cert.interval_hi * (1.0 - tol)) {
    cert.reason = "coverage bound " + std::to_string(coverage.bound) + " is below delta^2 sys";
    return cert;
  }

  // The interval is open at both ends.
  const bool exact_bound = d2_rational && sys.is_exact();
  const Rational hi_exact = exact_bound ? *d2_rational * *sys.exact : Rational(0);
  for (const auto& v : spectrum) {
    if (!action_less(sys, v, 0.0)) continue;
    const bool below = exact_bound && v.is_exact() ? *v.exact < hi_exact : v.value < cert.interval_hi;
    if (below) cert.witnesses.push_back(v);
  }

  cert.pi_R2 = std::numbers::pi * R * R;
  cert.delta2_pi_r2 = d2 * std::numbers::pi * r * r;
  cert.delta2_sys = cert.interval_hi;
  cert.chain_second = cert.pi_R2 < cert.delta2_pi_r2;
  cert.chain_third = cert.delta2_pi_r2 <= cert.delta2_sys * (1.0 + tol);
  if (n > 0 && invariants.size() >= static_cast<std::size_t>(n)) {
    cert.c_n_minus_1 = invariants[static_cast<std::size_t>(n - 1)].value;
    cert.chain_first = *cert.c_n_minus_1 <= cert.pi_R2 * (1.0 + tol);
  }

  if (!cert.witnesses.empty()) {
    cert.reason = "spectrum meets (sys, delta^2 sys) at " + cert.witnesses.front().to_string();
    return cert;
  }
  if (!(cert.chain_first && cert.chain_second && cert.chain_third)) {
    cert.reason = "bound chain c_{n-1} <= pi R^2 < delta^2 pi r^2 <= delta^2 sys violated";
    return cert;
  }
  cert.verdict = PinchingCertificate::Verdict::certified;
  cert.reason = "no action in (sys, delta^2 sys)";
  return cert;
}

PinchingCertificate zoll_by_pinching(const ConvexBody& body, const std::vector<Action>& spectrum,
                                     const SpectrumCoverage& coverage, double delta,
                                     const std::vector<Action>& invariants) {
  const PinchingRadii radii = pinching_radii(body);
  return zoll_by_pinching(radii.r, radii.R, spectrum, coverage, delta, invariants, body.n());
}

SufficientVerdict besse_sufficient_eh(const std::vector<Action>& c, int n, bool spectrum_discrete_attested,
                                      double tol_eq) {
  SufficientVerdict out;
  if (!spectrum_discrete_attested) {
    out.refused = true;
    out.note = "discreteness of the spectrum not attested";
    return out;
  }
  out.tag = "sufficient condition on capacities";
  out.hits = besse_by_invariants(c, n, tol_eq);
  out.besse = !out.hits.empty();
  out.degenerate = n == 1;
  if (out.degenerate) out.note = "n = 1: every index is a hit";
  else if (!out.besse) out.note = "no hit; no conclusion (the condition is only sufficient)";
  return out;
}

}  // namespace reeb
