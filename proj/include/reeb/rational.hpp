#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reeb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal literal ("1.25") exactly.
/// Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// True if `text` is an integer or "p/q" literal (no decimal point).
bool is_rational_literal(std::string_view text);

std::string to_string(const Rational& r);
double to_double(const Rational& r);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);
bool is_integer(const Rational& r);

/// lcm of positive rationals: lcm of reduced numerators over gcd of reduced
/// denominators.
Rational lcm(std::span<const Rational> values);

/// Outcome of a continued-fraction search for a rational p/q with q bounded.
struct RationalCertificate {
  std::optional<Rational> value;  // set when some convergent matches x within tol
  std::int64_t max_denominator = 0;
  double tolerance = 0.0;
  std::int64_t last_denominator = 0;  // denominator of the last convergent examined
  double last_error = 0.0;
};

/// Walks the continued-fraction convergents of x until one matches within
/// `rel_tol * |x|` or the denominator exceeds `max_denominator`.
RationalCertificate rational_reconstruction(double x, std::int64_t max_denominator = 1'000'000,
                                            double rel_tol = 8.0 * 2.220446049250313e-16);

/// A spectral value carried both as a double and, when known, exactly.
struct Action {
  double value = 0.0;
  std::optional<Rational> exact;

  Action() = default;
  explicit Action(double v) : value(v) {}
  explicit Action(const Rational& r) : value(to_double(r)), exact(r) {}

  bool is_exact() const { return exact.has_value(); }
  std::string to_string() const;
};

/// Rational equality when both sides are exact, relative tolerance otherwise.
bool same_action(const Action& a, const Action& b, double rel_tol);
/// a < b, decided exactly when possible; within rel_tol counts as equal (not less).
bool action_less(const Action& a, const Action& b, double rel_tol);

}  // namespace reeb
