#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germlab/circle.hpp"

using namespace germlab;

namespace {

const CirclePipeline& pipe0() {
  static const auto p = CirclePipeline::at_tongue(RationalAngle(0, 1), 0.1);
  return p;
}

}  // namespace

TEST_CASE("Laurent descriptor of a Laurent polynomial") {
  const CircleMap g{[](cplx w) { return 2.0 * w + 0.5 / w + 0.25 * w * w; }, "poly"};
  const auto d = LaurentDescriptor::from_map(g, 256);
  CHECK(std::abs(d.coeff(1) - 2.0) < 1e-13);
  CHECK(std::abs(d.coeff(-1) - 0.5) < 1e-13);
  CHECK(std::abs(d.coeff(2) - 0.25) < 1e-13);
  CHECK(std::abs(d.coeff(0)) < 1e-13);
  CHECK(d.decayed());
  CHECK(std::abs(d.eval(cplx(0.3, 1.1)) - g(cplx(0.3, 1.1))) < 1e-12);
}

TEST_CASE("rigid rotations are r-good for every r in (1, 2]") {
  const auto rot = rigid_rotation(0.3);
  for (double r : {1.01, 1.5, 1.99, 2.0}) CHECK(is_r_good_circle(rot, r));
  CHECK(is_r_good_circle(circle_identity(), 1.5));
}

TEST_CASE("r-goodness of f itself") {
  const double b = 0.1;
  const ArnoldSystem sys(0.3, b);
  const auto f = arnold_iterate(sys, 1);
  CHECK(is_r_good_circle(f, 1.05));
  // On the real ray |f(r)| = r e^{πb(r - 1/r)}.
  double r = 1.0;
  while (r * std::exp(std::numbers::pi * b * (r - 1 / r)) < 2.0) r += 0.01;
  CHECK_FALSE(is_r_good_circle(f, r));
  const CircleMap g{[](cplx w) { return w * std::exp(std::numbers::pi * 0.15 * (w - 1.0 / w)); }, "g"};
  CHECK_FALSE(is_r_good_circle(g, 2.0));
}

TEST_CASE("K' contains 0 and 1 for a small r") {
  const auto k = K_prime_set(0.3, 0.1, 1.05);
  CHECK(std::find(k.members.begin(), k.members.end(), 0) != k.members.end());
  CHECK(std::find(k.members.begin(), k.members.end(), 1) != k.members.end());
  CHECK_FALSE(k.capped);
}

TEST_CASE("critical values at the 0/1 parameter share an argument") {
  const auto crit = circle_critical_values(pipe0());
  CHECK(crit.arg_defect < 1e-6);
  CHECK(tau_symmetry_residual(pipe0()) < 1e-8);
}

TEST_CASE("circle centralizer identifies iterates of f") {
  const auto& p = pipe0();
  const auto v1 = circle_centralizer_test(p, arnold_iterate(p.sys, 1));
  REQUIRE(v1.identified_power);
  CHECK(*v1.identified_power == 1);
  const auto v0 = circle_centralizer_test(p, circle_identity());
  CHECK(std::abs(v0.mu) < 1e-9);
  REQUIRE(v0.identified_power);
  CHECK(*v0.identified_power == 0);
  CHECK_THROWS_AS(circle_centralizer_test(p, rigid_rotation(0.1)), Error);
}

TEST_CASE("two stages of the parameter sequence") {
  const auto s = a_sequence_builder(0.15, 2);
  REQUIRE(s.stages.size() == 2);
  CHECK(s.complete);
  for (const auto& st : s.stages) CHECK(st.all_ok());
  CHECK(s.stages[1].a > s.stages[0].a);
}
