#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germlab/centralizer.hpp"
#include "germlab/sequence.hpp"

using namespace germlab;

namespace {

Germ q_iterate(const RationalAngle& pq, int m) { return iterate(quadratic_germ(pq, 32), m); }

}  // namespace

TEST_CASE("Q_1/2 is the first power of itself") {
  const auto v = centralizer_test(RationalAngle(1, 2), q_iterate(RationalAngle(1, 2), 1));
  CHECK(std::abs(v.b1 + 1.0) < 1e-12);
  CHECK(v.j == 1);
  CHECK(std::abs(v.mu - 1.0) < 1e-6);
  REQUIRE(v.identified_power);
  CHECK(*v.identified_power == 1);
}

TEST_CASE("identity is the zeroth power") {
  const auto v = centralizer_test(RationalAngle(0, 1), Germ::identity(16));
  CHECK(v.b1 == cplx(1));
  CHECK(v.j == 0);
  CHECK(v.mu == cplx(0));
  REQUIRE(v.identified_power);
  CHECK(*v.identified_power == 0);
}

TEST_CASE("negative iterate for 1/3") {
  const auto v = centralizer_test(RationalAngle(1, 3), q_iterate(RationalAngle(1, 3), -2));
  REQUIRE(v.identified_power);
  CHECK(*v.identified_power == -2);
  CHECK(v.mu_distance < 1e-6);
}

TEST_CASE("non-commuting germs are rejected") {
  const auto g = quadratic_germ(0.1, 16);
  try {
    centralizer_test(RationalAngle(0, 1), g);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::not_a_centralizer_candidate || e.code() == ErrorCode::not_commuting));
  }
}

TEST_CASE("translation residuals of iterates of F") {
  const auto& p = *QuadraticPipeline::get(RationalAngle(0, 1));
  const PlaneMap F = [&p](cplx z) { return p.map(z); };
  const PlaneMap F2 = [&p](cplx z) { return p.map(p.map(z)); };
  const PlaneMap id = [](cplx z) { return z; };
  const auto samples = petal_samples(p.att, p.data.s_att + 6, 16);
  const double acc = p.att.accuracy();
  CHECK(translation_residual(p.att, id, 0.0, samples) < 1e-12);
  CHECK(translation_residual(p.att, F, 1.0, samples) <= 2 * acc + 1e-12);
  CHECK(translation_residual(p.att, F2, 2.0, samples) <= 3 * acc + 1e-12);
}

TEST_CASE("multiplier rigidity") {
  const double alpha = std::sqrt(2.0) - 1;
  CHECK(multiplier_rigidity_check(alpha, Germ::identity(12), 12));
  std::vector<cplx> c(12, 0.0);
  c[0] = 1;
  c[1] = 1e-3;
  CHECK_FALSE(multiplier_rigidity_check(alpha, Germ(c), 12));
  const auto q = quadratic_germ(alpha, 12);
  CHECK(multiplier_rigidity_check(alpha, compose(iterate(q, 1), iterate(q, -1)), 12));
}

TEST_CASE("rational helpers") {
  CHECK(simplest_between(Rational(1, 3), Rational(1, 2)) == Rational(2, 5));
  CHECK(simplest_between(Rational(0), Rational(1)) == Rational(1, 2));
  CHECK(decimal_string(Rational(1, 3), 5) == "0.33333");
  CHECK(to_rational(0.375) == Rational(3, 8));
}

TEST_CASE("delta estimate at 0/1 is positive and K is stable") {
  const auto d = delta_estimate(RationalAngle(0, 1), 1.0, 12);
  CHECK(d.delta > 0);
  CHECK(d.provenance.k_stable);
  CHECK(k_inclusion(RationalAngle(0, 1), RationalAngle(0, 1), 1.0));
}

TEST_CASE("two stages of the rational sequence") {
  const auto s = build_alpha_sequence(2);
  REQUIRE(s.stages.size() == 2);
  CHECK(s.complete);
  for (const auto& st : s.stages) CHECK(st.all_ok());
  CHECK(s.stages[0].pq == RationalAngle(0, 1));
  CHECK(s.stages[1].pq.value() > 0);
}
