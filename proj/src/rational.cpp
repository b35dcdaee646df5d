#include "reeb/rational.hpp"

#include "reeb/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>

namespace reeb {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("not an integer: '" + std::string(s) + "'");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_rational_literal(std::string_view text) {
  text = trim(text);
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return all_digits(text);
  return all_digits(text.substr(0, slash)) && all_digits(text.substr(slash + 1));
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InputError("empty number");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt p = parse_integer(trim(text.substr(0, slash)));
    BigInt q = parse_integer(trim(text.substr(slash + 1)));
    if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_integer(text));
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  bool negative = !whole.empty() && whole.front() == '-';
  if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
  if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
      (!frac.empty() && !all_digits(frac)))
    throw InputError("not a decimal literal: '" + std::string(text) + "'");
  BigInt num = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
  BigInt den = 1;
  for (char c : frac) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  const BigInt& q = denominator(r);
  if (q == 1) return numerator(r).str();
  return numerator(r).str() + "/" + q.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

BigInt floor_of(const Rational& r) {
  BigInt p = numerator(r), q = denominator(r);
  BigInt quot = p / q;
  if (p < 0 && quot * q != p) quot -= 1;
  return quot;
}

BigInt ceil_of(const Rational& r) {
  BigInt f = floor_of(r);
  return Rational(f) == r ? f : BigInt(f + 1);
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

Rational lcm(std::span<const Rational> values) {
  if (values.empty()) throw InputError("lcm of an empty list");
  BigInt num = 1, den = 0;
  for (const Rational& v : values) {
    if (v <= 0) throw InputError("lcm requires positive rationals");
    num = boost::multiprecision::lcm(num, numerator(v));
    den = boost::multiprecision::gcd(den, denominator(v));
  }
  return Rational(num, den);
}

RationalCertificate rational_reconstruction(double x, std::int64_t max_denominator, double rel_tol) {
  RationalCertificate cert;
  cert.max_denominator = max_denominator;
  cert.tolerance = rel_tol;
  if (!std::isfinite(x)) return cert;
  const bool negative = x < 0;
  const long double ax = std::fabs(static_cast<long double>(x));
  long double y = ax;
  BigInt h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    long double a = std::floor(y);
    BigInt ai(static_cast<std::int64_t>(a));
    BigInt h = ai * h1 + h2;
    BigInt k = ai * k1 + k2;
    if (k > max_denominator) break;
    h2 = h1; h1 = h;
    k2 = k1; k1 = k;
    const long double approx = h.convert_to<long double>() / k.convert_to<long double>();
    cert.last_denominator = k.convert_to<std::int64_t>();
    cert.last_error = static_cast<double>(std::fabs(approx - ax));
    if (cert.last_error <= rel_tol * static_cast<double>(ax)) {
      Rational r(h, k);
      cert.value = negative ? Rational(-r) : r;
      return cert;
    }
    long double frac = y - a;
    if (frac <= 0) break;
    y = 1.0L / frac;
    if (y > 1e18L) break;
  }
  return cert;
}

std::string Action::to_string() const {
  if (exact) return reeb::to_string(*exact);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

bool same_action(const Action& a, const Action& b, double rel_tol) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  const double scale = std::max({1e-300, std::fabs(a.value), std::fabs(b.value)});
  return std::fabs(a.value - b.value) <= rel_tol * scale;
}

bool action_less(const Action& a, const Action& b, double rel_tol) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return !same_action(a, b, rel_tol) && a.value < b.value;
}

}  // namespace reeb
