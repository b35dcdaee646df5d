#include "reeb/certifier.hpp"
#include "reeb/ellipsoid.hpp"
#include "reeb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace reeb;

namespace {

std::vector<Action> exact_list(std::initializer_list<int> values) {
  std::vector<Action> out;
  for (int v : values) out.emplace_back(Rational(v));
  return out;
}

PinchingCertificate pinch_ellipsoid(const Ellipsoid& e, double delta = std::numbers::sqrt2) {
  const double r = std::sqrt(e.params().front() / std::numbers::pi);
  const double R = std::sqrt(e.params().back() / std::numbers::pi);
  const double bound = delta * delta * e.params().front() * (1 + 1e-9);
  std::vector<Action> values;
  for (const auto& x : action_spectrum(e, bound).entries) values.push_back(x.tau);
  return zoll_by_pinching(r, R, values, {true, bound, "exact ellipsoid spectrum"}, delta, spectral_invariants(e, e.n()),
                          static_cast<int>(e.n()));
}

}  // namespace

TEST_CASE("invariant scan on E(1,2) and E(1,1)") {
  const auto h = besse_by_invariants(exact_list({1, 2, 2, 3}), 2);
  REQUIRE(h.size() == 1);
  CHECK(h[0].i == 1);
  CHECK(*h[0].tau.exact == Rational(2));
  CHECK(h[0].mu == 4);
  CHECK(h[0].exact);
  CHECK(h[0].mu == besse_cz_index(Ellipsoid::parse({"1", "2"}), h[0].tau));

  const auto z = besse_by_invariants(exact_list({1, 1, 2, 2}), 2);
  REQUIRE(z.size() == 2);
  CHECK(z[0].i == 0);
  CHECK(z[0].mu == 2);
  CHECK(zoll_by_invariants(exact_list({1, 1, 2, 2}), 2));
  CHECK_FALSE(zoll_by_invariants(exact_list({1, 2, 2, 3}), 2));
  CHECK(besse_by_invariants(exact_list({1, 2, 3, 4, 5}), 2).empty());
}

TEST_CASE("float scan uses the relative tolerance") {
  std::vector<Action> c{Action(1.0), Action(1.0 + 1e-12), Action(2.0)};
  CHECK(besse_by_invariants(c, 2).size() == 1);
  std::vector<Action> d{Action(1.0), Action(1.0 + 1e-6), Action(2.0)};
  CHECK(besse_by_invariants(d, 2).empty());
  CHECK_FALSE(besse_by_invariants(c, 2)[0].exact);
}

TEST_CASE("random Besse ellipsoids hit exactly at the predicted indices") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(1, 6), den(1, 3), dim(2, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::string> tok;
    const int n = dim(rng);
    for (int h = 0; h < n; ++h) tok.push_back(std::to_string(num(rng)) + "/" + std::to_string(den(rng)));
    const auto e = Ellipsoid::parse(tok);
    const Rational L = *classify(e).minimal_period->exact;
    const auto c = spectral_invariants(e, 120);
    const auto hits = besse_by_invariants(c, n);
    // expected hits: one per common period k L whose index i + n - 1 fits
    std::vector<std::int64_t> expected;
    for (int k = 1;; ++k) {
      const auto mu = besse_cz_index(e, Action(L * k));
      const auto i = (mu - n) / 2;
      if (i + n - 1 >= static_cast<std::int64_t>(c.size())) break;
      expected.push_back(i);
    }
    REQUIRE(hits.size() == expected.size());
    for (std::size_t k = 0; k < hits.size(); ++k) {
      CHECK(hits[k].i == expected[k]);
      CHECK(*hits[k].tau.exact == L * static_cast<int>(k + 1));
    }
  }
}

TEST_CASE("pinching certificate on E(1,x)") {
  const auto round = pinch_ellipsoid(Ellipsoid::parse({"1", "1"}));
  CHECK(round.verdict == PinchingCertificate::Verdict::certified);
  CHECK(round.witnesses.empty());
  CHECK(round.chain_first);
  CHECK(round.chain_second);
  CHECK(round.chain_third);

  const auto besse = pinch_ellipsoid(Ellipsoid::parse({"1", "3/2"}));
  CHECK(besse.verdict == PinchingCertificate::Verdict::refused);
  REQUIRE(besse.witnesses.size() == 1);
  CHECK(*besse.witnesses[0].exact == Rational(3, 2));

  const auto near = pinch_ellipsoid(Ellipsoid::parse({"1", "11/10"}));
  CHECK(near.verdict == PinchingCertificate::Verdict::refused);
  CHECK(near.chain_second);

  const auto wide = pinch_ellipsoid(Ellipsoid::parse({"1", "3"}));
  CHECK(wide.verdict == PinchingCertificate::Verdict::not_applicable);
}

TEST_CASE("round ball with delta close to 1") {
  const double r = 0.8;
  const double a = std::numbers::pi * r * r;
  std::vector<Action> spec{Action(a), Action(2 * a)};
  const auto c = zoll_by_pinching(r, r, spec, {true, 2.1 * a, "closed form"}, 1.0 + 1e-6);
  CHECK(c.verdict == PinchingCertificate::Verdict::certified);
}

TEST_CASE("pinching refusals and preconditions") {
  std::vector<Action> spec{Action(1.0), Action(2.0)};
  const double r = std::sqrt(1.0 / std::numbers::pi);
  CHECK(zoll_by_pinching(r, r, spec, {false, 3.0, ""}).verdict == PinchingCertificate::Verdict::refused);
  CHECK(zoll_by_pinching(r, r, spec, {true, 1.5, ""}).verdict == PinchingCertificate::Verdict::refused);
  CHECK(zoll_by_pinching(r, r, spec, {true, 3.0, ""}, 1.5).verdict == PinchingCertificate::Verdict::not_applicable);
  CHECK(zoll_by_pinching(r, r, spec, {true, 3.0, ""}, 1.0).verdict == PinchingCertificate::Verdict::not_applicable);
  CHECK_THROWS_AS(zoll_by_pinching(0.0, r, spec, {true, 3.0, ""}), InputError);
  // a spectrum value exactly at delta^2 sys lies outside the open interval
  const auto edge = zoll_by_pinching(r, r, spec, {true, 3.0, ""});
  CHECK(edge.verdict == PinchingCertificate::Verdict::certified);
}

TEST_CASE("sufficient condition on capacities") {
  const auto c = spectral_invariants(Ellipsoid::parse({"1", "2", "4"}), 30);
  const auto v = besse_sufficient_eh(c, 3, true);
  CHECK_FALSE(v.refused);
  CHECK(v.besse);
  CHECK(v.tag == "sufficient condition on capacities");
  const auto direct = besse_by_invariants(c, 3);
  REQUIRE(v.hits.size() == direct.size());
  for (std::size_t k = 0; k < direct.size(); ++k) CHECK(v.hits[k].i == direct[k].i);

  const auto one = besse_sufficient_eh(exact_list({1, 2, 3}), 1, true);
  CHECK(one.degenerate);
  CHECK(one.hits.size() == 3);

  const auto gate = besse_sufficient_eh(c, 3, false);
  CHECK(gate.refused);
  CHECK(gate.tag.empty());
  CHECK(gate.hits.empty());
}
