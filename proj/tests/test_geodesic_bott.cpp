#include "reeb/errors.hpp"
#include "reeb/geodesic_bott.hpp"

#include <doctest.h>

#include <numbers>

using namespace reeb;

TEST_CASE("Bott indices of S^2 and CP^2") {
  const CrossModel s2(CrossFamily::sphere, 2);
  CHECK(bott_indices(s2, 1).index == 1);
  CHECK(bott_indices(s2, 1).nullity == 3);
  CHECK(bott_indices(s2, 2).index == 3);
  CHECK(bott_indices(s2, 3).index == 5);
  const CrossModel cp2(CrossFamily::complex_projective, 4);
  CHECK(bott_indices(cp2, 1).index == 1);
  CHECK(bott_indices(cp2, 1).nullity == 7);
  CHECK_THROWS_AS(bott_indices(s2, 0), InputError);
}

TEST_CASE("initial indices and model validation") {
  CHECK(CrossModel(CrossFamily::sphere, 5).initial_index() == 4);
  CHECK(CrossModel(CrossFamily::complex_projective, 6).initial_index() == 1);
  CHECK(CrossModel(CrossFamily::quaternionic_projective, 8).initial_index() == 3);
  CHECK(CrossModel(CrossFamily::cayley_plane, 16).initial_index() == 7);
  CHECK(CrossModel(CrossFamily::real_projective, 3).initial_index() == 0);
  CHECK_THROWS_AS(CrossModel(CrossFamily::complex_projective, 5), InputError);
  CHECK_THROWS_AS(CrossModel(CrossFamily::quaternionic_projective, 6), InputError);
  CHECK_THROWS_AS(CrossModel(CrossFamily::cayley_plane, 8), InputError);
  CHECK_THROWS_AS(CrossModel(CrossFamily::sphere, 1), InputError);
  CHECK(parse_cross_family("cp") == CrossFamily::complex_projective);
  CHECK_THROWS_AS(parse_cross_family("torus"), InputError);
}

TEST_CASE("spin flag") {
  CHECK(CrossModel(CrossFamily::sphere, 4).spin());
  CHECK_FALSE(CrossModel(CrossFamily::complex_projective, 4).spin());
  CHECK(CrossModel(CrossFamily::complex_projective, 6).spin());
  CHECK(CrossModel(CrossFamily::quaternionic_projective, 8).spin());
  CHECK_FALSE(CrossModel(CrossFamily::real_projective, 3).simply_connected());
}

TEST_CASE("class degrees") {
  const CrossModel s2(CrossFamily::sphere, 2);
  CHECK(class_degrees(s2, 1).alpha == 1);
  CHECK(class_degrees(s2, 1).beta == 3);
  CHECK(class_degrees(s2, 2).alpha == 3);
  CHECK(class_degrees(s2, 2).beta == 5);
  for (int n = 2; n <= 9; ++n) {
    const CrossModel s(CrossFamily::sphere, n);
    CHECK(class_degrees(s, 1).alpha == n - 1);
    CHECK(class_degrees(s, 1).beta == 3 * (n - 1));
  }
}

TEST_CASE("index gap between iterates") {
  const CrossModel hp(CrossFamily::quaternionic_projective, 8);
  for (int m = 1; m < 10; ++m)
    CHECK(bott_indices(hp, m + 1).index - bott_indices(hp, m).index == hp.initial_index() + hp.n() - 1);
}

TEST_CASE("Zoll spectral values") {
  const CrossModel s2(CrossFamily::sphere, 2);
  const auto v = zoll_spectral_values(s2, 2 * std::numbers::pi, 3);
  REQUIRE(v.size() == 3);
  for (int m = 1; m <= 3; ++m) {
    CHECK(v[m - 1].alpha == doctest::Approx(2 * m * std::numbers::pi));
    CHECK(v[m - 1].beta == v[m - 1].alpha);
  }
  const auto w = zoll_spectral_values(s2, 3.0 * 2 * std::numbers::pi, 3);
  for (int m = 0; m < 3; ++m) CHECK(w[m].alpha == doctest::Approx(3.0 * v[m].alpha));
  CHECK_THROWS_AS(zoll_spectral_values(s2, 0.0, 3), InputError);
}

TEST_CASE("equivariant cohomology ranks of S^2") {
  const CrossModel s2(CrossFamily::sphere, 2);
  const auto b = sphere_quotient_betti(2);
  REQUIRE(b == std::vector<std::int64_t>{1, 0, 1});
  CHECK(cohomology_rank(s2, 0, b) == 0);
  CHECK(cohomology_rank(s2, 1, b) == 1);
  CHECK(cohomology_rank(s2, 2, b) == 0);
  CHECK(cohomology_rank(s2, 3, b) == 2);
  CHECK(sphere_quotient_betti(3) == std::vector<std::int64_t>{1, 0, 2, 0, 1});
}
