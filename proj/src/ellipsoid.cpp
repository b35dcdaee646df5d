#include "reeb/ellipsoid.hpp"

#include "reeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace reeb {

namespace {

constexpr std::size_t kMaxSpectrumTerms = 50'000'000;

void check_sorted_positive(const std::vector<double>& v) {
  if (v.empty()) throw InputError("ellipsoid needs at least one parameter");
  for (double x : v)
    if (!(x > 0) || !std::isfinite(x)) throw InputError("ellipsoid parameters must be positive and finite");
}

template <class Int>
struct RawEntry {
  Int value;
  int multiplicity;
};

// Enumerates all k * step_h <= limit over the integers, merged with
// multiplicity. Works for std::int64_t and BigInt alike.
template <class Int>
std::vector<RawEntry<Int>> enumerate_multiples(const std::vector<Int>& steps, const Int& limit) {
  std::vector<Int> all;
  for (const Int& s : steps)
    for (Int v = s; v <= limit; v += s) all.push_back(v);
  std::sort(all.begin(), all.end());
  std::vector<RawEntry<Int>> out;
  for (const Int& v : all) {
    if (!out.empty() && out.back().value == v)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}

template <class Int>
std::int64_t morse_closed_form(const Int& value, const std::vector<Int>& steps) {
  std::int64_t sum = 0;
  for (const Int& s : steps) {
    Int c = (value + s - 1) / s;
    sum += static_cast<std::int64_t>(c) - 1;
  }
  return 2 * sum;
}

std::int64_t ceil_near_integer(double x) {
  const double r = std::round(x);
  if (std::fabs(x - r) <= kTolMerge * std::max(1.0, std::fabs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

bool near_integer(double x) {
  const double r = std::round(x);
  return r >= 1 && std::fabs(x - r) <= kTolMerge * std::max(1.0, std::fabs(x));
}

Spectrum exact_spectrum(const Ellipsoid& e, const Rational& max_action) {
  const auto& a = e.exact_params();
  BigInt scale = 1;
  for (const auto& x : a) scale = boost::multiprecision::lcm(scale, denominator(x));
  std::vector<BigInt> steps;
  for (const auto& x : a) steps.push_back(numerator(x) * (scale / denominator(x)));
  const BigInt limit = floor_of(max_action * scale);

  Rational terms = 0;
  for (const auto& s : steps) terms += Rational(limit, s);
  if (terms > kMaxSpectrumTerms) throw InputError("action window too large for enumeration");

  const std::int64_t n = static_cast<std::int64_t>(a.size());
  Spectrum spec;
  spec.mode = Arithmetic::exact;
  auto fill = [&](auto raw, auto steps_typed) {
    for (const auto& r : raw) {
      SpectrumEntry entry;
      entry.tau = Action(Rational(BigInt(r.value), scale));
      entry.multiplicity = r.multiplicity;
      entry.morse_index = morse_closed_form(r.value, steps_typed);
      entry.nullity = 2 * r.multiplicity - 1;
      entry.cz_index = entry.morse_index + n;
      spec.entries.push_back(std::move(entry));
    }
  };
  constexpr std::int64_t kFits = std::numeric_limits<std::int64_t>::max() / 4;
  const bool small = limit < kFits && std::all_of(steps.begin(), steps.end(), [&](const BigInt& s) { return s < kFits; });
  if (small) {
    std::vector<std::int64_t> s64;
    for (const auto& s : steps) s64.push_back(s.convert_to<std::int64_t>());
    fill(enumerate_multiples(s64, limit.convert_to<std::int64_t>()), s64);
  } else {
    fill(enumerate_multiples(steps, limit), steps);
  }
  return spec;
}

Spectrum floating_spectrum(const Ellipsoid& e, double max_action) {
  const auto& a = e.params();
  std::size_t terms = 0;
  for (double x : a) terms += static_cast<std::size_t>(max_action / x);
  if (terms > kMaxSpectrumTerms) throw InputError("action window too large for enumeration");

  struct Term {
    double value;
    std::size_t h;
    std::int64_t k;
  };
  std::vector<Term> all;
  for (std::size_t h = 0; h < a.size(); ++h)
    for (std::int64_t k = 1; static_cast<double>(k) * a[h] <= max_action * (1 + kTolMerge); ++k)
      all.push_back({static_cast<double>(k) * a[h], h, k});
  std::sort(all.begin(), all.end(), [](const Term& x, const Term& y) { return x.value < y.value; });

  Spectrum spec;
  spec.mode = Arithmetic::floating;
  spec.tol_merge = kTolMerge;
  const auto n = static_cast<std::int64_t>(a.size());
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i + 1;
    while (j < all.size() && all[j].value - all[i].value <= kTolMerge * all[i].value) ++j;
    for (std::size_t p = i; p < j; ++p)
      for (std::size_t q = p + 1; q < j; ++q) {
        if (all[p].h == all[q].h) continue;
        if (a[all[p].h] == a[all[q].h]) continue;
        // k_p a_p = k_q a_q exactly iff a_p / a_q = k_q / k_p.
        auto cert = rational_reconstruction(a[all[p].h] / a[all[q].h]);
        if (!cert.value || *cert.value != Rational(all[q].k, all[p].k))
          spec.warnings.push_back("ambiguous merge near action " + std::to_string(all[i].value) +
                                  ": values agree within tol_merge but the parameter ratio is not " +
                                  std::to_string(all[q].k) + "/" + std::to_string(all[p].k));
      }
    double tau = 0;
    for (std::size_t p = i; p < j; ++p) tau += all[p].value;
    tau /= static_cast<double>(j - i);
    SpectrumEntry entry;
    entry.tau = Action(tau);
    entry.multiplicity = static_cast<int>(j - i);
    std::int64_t sum = 0;
    for (double x : a) sum += ceil_near_integer(tau / x) - 1;
    entry.morse_index = 2 * sum;
    entry.nullity = 2 * entry.multiplicity - 1;
    entry.cz_index = entry.morse_index + n;
    spec.entries.push_back(std::move(entry));
    i = j;
  }
  return spec;
}

}  // namespace

Ellipsoid Ellipsoid::exact(std::vector<Rational> a) {
  if (a.empty()) throw InputError("ellipsoid needs at least one parameter");
  for (const auto& x : a)
    if (x <= 0) throw InputError("ellipsoid parameters must be positive");
  std::sort(a.begin(), a.end());
  Ellipsoid e;
  for (const auto& x : a) e.values_.push_back(to_double(x));
  e.exact_ = std::move(a);
  return e;
}

Ellipsoid Ellipsoid::floating(std::vector<double> a) {
  check_sorted_positive(a);
  std::sort(a.begin(), a.end());
  Ellipsoid e;
  e.values_ = std::move(a);
  return e;
}

Ellipsoid Ellipsoid::parse(const std::vector<std::string>& tokens, bool force_float) {
  std::vector<Rational> r;
  for (const auto& t : tokens) r.push_back(parse_rational(t));
  if (!force_float) return exact(std::move(r));
  std::vector<double> d;
  for (const auto& x : r) d.push_back(to_double(x));
  return floating(std::move(d));
}

const std::vector<Rational>& Ellipsoid::exact_params() const {
  if (!exact_) throw InputError("ellipsoid is in floating mode; exact parameters unavailable");
  return *exact_;
}

Action Ellipsoid::param(std::size_t h) const {
  if (exact_) return Action((*exact_)[h]);
  return Action(values_[h]);
}

Ellipsoid Ellipsoid::scaled(const Rational& s) const {
  if (s <= 0) throw InputError("scale must be positive");
  if (!exact_) return scaled(to_double(s));
  std::vector<Rational> a = *exact_;
  for (auto& x : a) x *= s;
  return exact(std::move(a));
}

Ellipsoid Ellipsoid::scaled(double s) const {
  if (!(s > 0)) throw InputError("scale must be positive");
  std::vector<double> a = values_;
  for (auto& x : a) x *= s;
  return floating(std::move(a));
}

double surface_residual(const Ellipsoid& e, const Vector& z) {
  if (z.size() != static_cast<Eigen::Index>(2 * e.n())) throw InputError("point has the wrong dimension");
  double s = 0;
  for (std::size_t h = 0; h < e.n(); ++h) s += z.segment<2>(2 * h).squaredNorm() / e.params()[h];
  return s - 1.0 / std::numbers::pi;
}

Vector reeb_flow(const Ellipsoid& e, const Vector& z, double t) {
  if (std::fabs(surface_residual(e, z)) > 1e-12) throw InputError("reeb_flow: point is not on the ellipsoid");
  Vector out(z.size());
  for (std::size_t h = 0; h < e.n(); ++h)
    out.segment<2>(2 * h) = rotation_block(t / e.params()[h]) * z.segment<2>(2 * h);
  return out;
}

Spectrum action_spectrum(const Ellipsoid& e, const Action& max_action) {
  if (!(max_action.value > 0)) throw InputError("max_action must be positive");
  if (e.is_exact()) {
    const Rational m = max_action.exact ? *max_action.exact : Rational(max_action.value);
    return exact_spectrum(e, m);
  }
  return floating_spectrum(e, max_action.value);
}

Spectrum action_spectrum(const Ellipsoid& e, double max_action) { return action_spectrum(e, Action(max_action)); }

std::vector<Action> invariants_from_spectrum(const std::vector<SpectrumEntry>& entries, std::size_t count) {
  std::vector<Action> c;
  c.reserve(count);
  for (const auto& entry : entries)
    for (int k = 0; k < entry.multiplicity && c.size() < count; ++k) c.push_back(entry.tau);
  return c;
}

std::vector<Action> spectral_invariants(const Ellipsoid& e, std::size_t count) {
  if (count == 0) throw InputError("count must be positive");
  // The multiples of a_1 alone fill `count` slots below count * a_1.
  Action window = e.is_exact() ? Action(e.exact_params().front() * static_cast<long long>(count))
                               : Action(e.params().front() * static_cast<double>(count));
  auto spec = action_spectrum(e, window);
  auto c = invariants_from_spectrum(spec.entries, count);
  if (c.size() < count) throw NumericalError("spectral_invariants: enumeration window too small");
  return c;
}

std::string to_string(Classification::Verdict v) {
  switch (v) {
    case Classification::Verdict::zoll: return "Zoll";
    case Classification::Verdict::besse: return "Besse";
    case Classification::Verdict::not_besse: return "NotBesse";
  }
  return "?";
}

Classification classify(const Ellipsoid& e) {
  Classification c;
  if (e.is_exact()) {
    const auto& a = e.exact_params();
    const bool round = std::all_of(a.begin(), a.end(), [&](const Rational& x) { return x == a.front(); });
    c.verdict = round ? Classification::Verdict::zoll : Classification::Verdict::besse;
    c.minimal_period = Action(lcm(a));
    c.note = "exact rational parameters";
    return c;
  }
  const auto& a = e.params();
  c.heuristic = true;
  c.denominator_bound = 1'000'000;
  std::vector<Rational> ratios;
  bool all_rational = true;
  for (double x : a) {
    auto cert = rational_reconstruction(x / a.front(), c.denominator_bound);
    c.ratio_certificates.push_back(cert);
    if (cert.value)
      ratios.push_back(*cert.value);
    else
      all_rational = false;
  }
  if (!all_rational) {
    c.verdict = Classification::Verdict::not_besse;
    c.note = "some ratio a_h/a_1 has no continued-fraction convergent with denominator <= 1e6 at "
             "double precision; any common period would exceed 1e6 * a_1";
    return c;
  }
  const bool round = std::all_of(ratios.begin(), ratios.end(), [](const Rational& r) { return r == 1; });
  c.verdict = round ? Classification::Verdict::zoll : Classification::Verdict::besse;
  c.minimal_period = Action(to_double(lcm(ratios)) * a.front());
  c.note = "ratios reconstructed as rationals with denominator <= 1e6";
  return c;
}

std::int64_t besse_cz_index(const Ellipsoid& e, const Action& tau) {
  if (!(tau.value > 0)) throw InputError("tau must be positive");
  const auto n = static_cast<std::int64_t>(e.n());
  std::int64_t sum = 0;
  if (e.is_exact() && tau.exact) {
    for (const auto& a : e.exact_params()) {
      Rational q = *tau.exact / a;
      if (!is_integer(q)) throw InputError("tau = " + tau.to_string() + " is not a common period");
      sum += numerator(q).convert_to<std::int64_t>();
    }
  } else {
    for (double a : e.params()) {
      if (!near_integer(tau.value / a)) throw InputError("tau = " + tau.to_string() + " is not a common period");
      sum += static_cast<std::int64_t>(std::round(tau.value / a));
    }
  }
  const std::int64_t mu = 2 * sum - n;
  if ((mu - n) % 2 != 0 || mu < n) throw NumericalError("besse_cz_index: mu violates mu = n mod 2, mu >= n");
  return mu;
}

InterleavingReport verify_interleaving(const Ellipsoid& e, const Action& tau) {
  InterleavingReport r;
  r.mu = besse_cz_index(e, tau);
  const auto n = static_cast<std::int64_t>(e.n());
  r.i = (r.mu - n) / 2;
  const auto c = spectral_invariants(e, static_cast<std::size_t>(r.i + n + 1));
  const Action zero = e.is_exact() ? Action(Rational(0)) : Action(0.0);
  r.c_before = r.i == 0 ? zero : c[r.i - 1];
  r.c_i = c[r.i];
  r.c_last = c[r.i + n - 1];
  r.c_after = c[r.i + n];
  r.before_strict = action_less(r.c_before, tau, kTolMerge);
  r.tau_is_c_i = same_action(tau, r.c_i, kTolMerge);
  r.equality = same_action(r.c_i, r.c_last, kTolMerge);
  r.after_strict = action_less(r.c_last, r.c_after, kTolMerge);
  return r;
}

SymplecticPath ellipsoid_rotation_path(const Ellipsoid& e, double tau) {
  std::vector<double> rates;
  for (double a : e.params()) rates.push_back(tau / a);
  return rotation_path(rates, 1.0);
}

}  // namespace reeb
