#include "reeb/errors.hpp"
#include "reeb/rational.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace reeb;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational("-2/3") == Rational(-2, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
}

TEST_CASE("is_rational_literal rejects decimals") {
  CHECK(is_rational_literal("3/2"));
  CHECK(is_rational_literal("12"));
  CHECK_FALSE(is_rational_literal("1.5"));
  CHECK_FALSE(is_rational_literal("1e3"));
}

TEST_CASE("lcm of rationals") {
  std::vector<Rational> v{Rational(3, 2), Rational(5, 4)};
  // multiples of 3/2: 3/2, 3, ..., 15/2; of 5/4: ..., 15/2 at k = 6
  CHECK(lcm(v) == Rational(15, 2));
  std::vector<Rational> w{Rational(1), Rational(2), Rational(3)};
  CHECK(lcm(w) == Rational(6));
  std::vector<Rational> bad{Rational(1), Rational(-1)};
  CHECK_THROWS_AS(lcm(bad), InputError);
}

TEST_CASE("floor and ceil") {
  CHECK(floor_of(Rational(7, 2)) == 3);
  CHECK(ceil_of(Rational(7, 2)) == 4);
  CHECK(ceil_of(Rational(4)) == 4);
  CHECK(floor_of(Rational(-1, 2)) == -1);
  CHECK(is_integer(Rational(6, 3)));
}

TEST_CASE("rational_reconstruction finds small fractions and rejects irrationals") {
  auto c = rational_reconstruction(7.0 / 3.0);
  REQUIRE(c.value);
  CHECK(*c.value == Rational(7, 3));
  auto s = rational_reconstruction(std::sqrt(2.0), 1'000'000);
  CHECK_FALSE(s.value);
  CHECK(s.last_denominator > 0);
}

TEST_CASE("Action comparisons") {
  Action a(Rational(1, 3)), b(Rational(2, 6)), c(1.0 / 3.0);
  CHECK(same_action(a, b, 0.0));
  CHECK(same_action(a, c, 1e-12));
  CHECK(action_less(Action(Rational(1, 3)), Action(Rational(1, 2)), 0.0));
  CHECK_FALSE(action_less(a, c, 1e-12));
  CHECK(a.to_string() == "1/3");
}
