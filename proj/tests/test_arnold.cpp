#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germlab/arnold.hpp"

using namespace germlab;

TEST_CASE("the complexified map preserves the unit circle") {
  const ArnoldSystem sys(0.37, 0.12);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(std::abs(sys.complexified(std::polar(1.0, 0.00629 * i))) - 1.0));
  CHECK(worst <= 1e-12);
  const cplx w(0.4, 1.7);
  CHECK(std::abs(sys.complexified(tau(w)) - tau(sys.complexified(w))) < 1e-12);
}

TEST_CASE("lift and its inverse") {
  const ArnoldSystem sys(0.2, 0.1);
  for (double x : {0.0, 0.3, 0.77}) {
    CHECK(std::abs(sys.lift_inverse(sys.lift(x)) - x) < 1e-13);
    CHECK(std::abs(sys.lift_iterate(sys.lift_iterate(x, 5), -5) - x) < 1e-11);
  }
  CHECK_THROWS_AS(ArnoldSystem(0.1, 0.2), Error);
  CHECK_THROWS_AS(ArnoldSystem(0.1, 0.0), Error);
}

TEST_CASE("rotation number at the right 0/1 boundary") {
  for (double b : {0.02, 0.05, 0.1}) {
    const auto r = rotation_number(ArnoldSystem(b, b));
    CHECK(r.value == 0.0);
    REQUIRE(r.rational);
    CHECK(*r.rational == RationalAngle(0, 1));
  }
}

TEST_CASE("rotation number is stable and non-decreasing") {
  RotationNumberOptions lo, hi;
  lo.iterations = 1 << 18;
  hi.iterations = 1 << 19;
  const ArnoldSystem sys(0.35, 0.05);
  const auto a = rotation_number(sys, lo);
  const auto b = rotation_number(sys, hi);
  CHECK(a.value > 0);
  CHECK(a.value < 1);
  CHECK(std::abs(a.value - b.value) < 1e-5);
  CHECK(a.lower <= b.upper);
  double prev_lower = -1;
  for (int i = 0; i < 20; ++i) {
    const auto r = rotation_number(ArnoldSystem(0.05 * i, 0.1), lo);
    CHECK(r.upper >= prev_lower);
    prev_lower = r.lower;
  }
}

TEST_CASE("critical points") {
  const auto c = critical_points(ArnoldSystem(0.3, 1.0 / (4 * std::numbers::pi)));
  CHECK(std::abs(c.c1 - (-2 + std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(c.c2 - (-2 - std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("0/1 tongue boundaries") {
  for (double b : {0.02, 0.05, 0.1}) {
    const auto right = parabolic_parameter(RationalAngle(0, 1), b, TongueSide::right);
    CHECK(std::abs(right.a - b) < 1e-9);
    CHECK(std::abs(right.cycle.multiplier - 1.0) < 1e-9);
    CHECK(std::abs(right.cycle.angles[0] - 0.75) < 1e-6);
    const auto left = parabolic_parameter(RationalAngle(0, 1), b, TongueSide::left);
    CHECK(std::abs(left.a + b) < 1e-9);
  }
}

TEST_CASE("1/2 tongue boundary") {
  const auto p = parabolic_parameter(RationalAngle(1, 2), 0.1, TongueSide::right);
  CHECK(p.cycle.period == 2);
  CHECK(std::abs(p.cycle.multiplier - 1.0) < 1e-8);
  RotationNumberOptions o;
  o.iterations = 1 << 16;
  CHECK(rotation_number(ArnoldSystem(p.a - 1e-4, 0.1), o).rational == RationalAngle(1, 2));
  CHECK(rotation_number(ArnoldSystem(p.a + 1e-3, 0.1), o).value > 0.5);
  CHECK_THROWS_AS(parabolic_parameter(RationalAngle(1, 2), 0.5, TongueSide::right), Error);
}

TEST_CASE("local chart at the cycle") {
  const auto p = parabolic_parameter(RationalAngle(0, 1), 0.1, TongueSide::right);
  const ArnoldSystem sys(p.a, 0.1);
  const auto map = circle_return_map(sys, p.cycle);
  CHECK(std::abs(map.jet().coeff(1) - 1.0) < 1e-9);
  CHECK(std::abs(map.jet().coeff(2).imag()) < 1e-12);
  CHECK(std::abs(map.jet().coeff(2)) > 1e-3);
  const cplx z(0.03, 0.02);
  CHECK(std::abs(map(z + 2 * std::numbers::pi) - map(z) - 2 * std::numbers::pi) < 1e-10);
}

TEST_CASE("tongue side names") {
  CHECK(tongue_side_from_string(to_string(TongueSide::left)) == TongueSide::left);
  CHECK_THROWS_AS(tongue_side_from_string("up"), Error);
}
