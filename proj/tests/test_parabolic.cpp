#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germlab/json_io.hpp"
#include "germlab/parabolic.hpp"

using namespace germlab;

TEST_CASE("normalize z + z^2") {
  const auto f = AnalyticMap::quadratic_return_map(RationalAngle(0, 1), 16);
  const auto d = normalize(f);
  CHECK(d.q == 1);
  CHECK(std::abs(d.a_next - 1.0) < 1e-15);
  CHECK(std::abs(d.v_att + 1.0) < 1e-15);
  CHECK(std::abs(d.v_rep - 1.0) < 1e-15);
  CHECK(d.ball_radius > 0);
  CHECK(d.s_att > 0);
}

TEST_CASE("normalize the second iterate of Q_1/2") {
  const auto d = normalize(AnalyticMap::quadratic_return_map(RationalAngle(1, 2), 16));
  CHECK(d.q == 2);
  CHECK(std::abs(d.a_next + 2.0) < 1e-12);
  CHECK(std::abs(d.v_att - 0.5) < 1e-12);
  CHECK(std::abs(d.v_rep - cplx(0, -0.5)) < 1e-12);
  CHECK(to_json(d)["q"] == 2);
}

TEST_CASE("attraction vector identity") {
  for (int q = 1; q <= 5; ++q) {
    const auto d = normalize(AnalyticMap::quadratic_return_map(RationalAngle(1 % q == 0 ? 0 : 1, q), 32));
    CHECK(std::abs(static_cast<double>(d.q) * d.a_next * std::pow(d.v_att, d.q) + 1.0) < 1e-12);
  }
}

TEST_CASE("normalize rejects maps not tangent to the identity") {
  const auto f = AnalyticMap::from_germ(quadratic_germ(0.25, 8), 4.0);
  CHECK_THROWS_AS(normalize(f), Error);
}

TEST_CASE("coordinate I and its inverse branch") {
  const auto d = normalize(AnalyticMap::quadratic_return_map(RationalAngle(0, 1), 16));
  CHECK(std::abs(inverse_branch(d, PetalKind::attracting, 10.0) + 0.1) < 1e-15);
  for (const cplx zeta : {cplx(12, 3), cplx(30, -7), cplx(15, 0.5)}) {
    const cplx z = inverse_branch(d, PetalKind::attracting, zeta, d.s_att);
    CHECK(std::abs(coord_I(d, z) - zeta) < 1e-12 * std::abs(zeta));
    CHECK(in_petal(d, PetalKind::attracting, z, d.s_att));
  }
  CHECK_THROWS_AS(inverse_branch(d, PetalKind::attracting, -50.0, d.s_att), Error);
}

TEST_CASE("lifted map of z + z^2") {
  const auto f = AnalyticMap::quadratic_return_map(RationalAngle(0, 1), 16);
  const auto d = normalize(f);
  const auto lifted = lift(f, d, PetalKind::attracting);
  CHECK(std::abs(lifted.evaluate_unchecked(10.0) - (11.0 + 1.0 / 9.0)) < 1e-12);
  for (const cplx zeta : {cplx(20, 1), cplx(40, -3), cplx(100, 2)})
    CHECK(std::abs(lifted(zeta) - (zeta + 1.0 + 1.0 / (zeta - 1.0))) < 1e-9);
  double prev = 1e9;
  for (double x : {20.0, 80.0, 320.0, 1280.0}) {
    const double dev = std::abs(lifted(cplx(x, 0)) - x - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("petal kind names round trip") {
  CHECK(petal_kind_from_string(to_string(PetalKind::repelling)) == PetalKind::repelling);
  CHECK_THROWS_AS(petal_kind_from_string("sideways"), Error);
}
