#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "germlab/json_io.hpp"
#include "germlab/series.hpp"

using namespace germlab;

namespace {

Germ poly(std::vector<cplx> c) { return Germ(std::move(c)); }

void check_coeffs(const Germ& g, const std::vector<cplx>& want, double tol = 1e-12) {
  REQUIRE(g.order() == static_cast<int>(want.size()));
  for (int k = 1; k <= g.order(); ++k) CHECK(std::abs(g.coeff(k) - want[k - 1]) < tol);
}

}  // namespace

TEST_CASE("quadratic germ coefficients") {
  check_coeffs(quadratic_germ(0.0, 4), {1, 1, 0, 0});
  check_coeffs(quadratic_germ(RationalAngle(1, 2), 3), {-1, 1, 0});
  const auto g = quadratic_germ(1.0 / 3.0, 2);
  CHECK(std::abs(g.coeff(1) - cplx(-0.5, std::sqrt(3.0) / 2)) < 1e-15);
  CHECK(g.coeff(2) == cplx(1));
  CHECK_THROWS_AS(quadratic_germ(0.0, 1), Error);
}

TEST_CASE("compose and iterate match hand expansions") {
  const auto q0 = quadratic_germ(0.0, 4);
  const auto qh = quadratic_germ(RationalAngle(1, 2), 4);
  check_coeffs(compose(Germ::identity(4), q0), {1, 1, 0, 0});
  check_coeffs(compose(qh, qh), {1, 0, -2, 1});
  check_coeffs(compose(q0, q0), {1, 2, 2, 1});
  check_coeffs(iterate(qh, 2), {1, 0, -2, 1});
  check_coeffs(iterate(q0, 0), {1, 0, 0, 0});
  const auto f8 = quadratic_germ(0.0, 8);
  check_coeffs(compose(iterate(f8, -1), f8), {1, 0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("reversion") {
  check_coeffs(reversion(Germ::identity(4)), {1, 0, 0, 0});
  check_coeffs(reversion(quadratic_germ(0.0, 4)), {1, -1, 2, -5});
  const double a = 0.3;
  const auto lin = Germ::linear(std::polar(1.0, 2 * std::numbers::pi * a), 3);
  check_coeffs(reversion(lin), {std::polar(1.0, -2 * std::numbers::pi * a), 0, 0});
  CHECK_THROWS_AS(reversion(poly({0, 1})), Error);
  CHECK_THROWS_AS(iterate(poly({0, 1}), -1), Error);
}

TEST_CASE("composition is associative and iterates add") {
  const auto f = poly({cplx(0.3, 0.8), 0.5, cplx(0.1, -0.2), 0.05, 0.3, 0, 0.2, 0.1});
  const auto g = poly({cplx(-0.6, 0.2), 0.1, 0.4, 0, cplx(0.2, 0.2), 0.1, 0, 0.3});
  const auto h = quadratic_germ(0.2, 8);
  const auto lhs = compose(compose(f, g), h);
  const auto rhs = compose(f, compose(g, h));
  for (int k = 1; k <= 8; ++k) CHECK(std::abs(lhs.coeff(k) - rhs.coeff(k)) <= 1e-10 * (1 + std::abs(lhs.coeff(k))));
  for (int j = -2; j <= 3; ++j)
    for (int k = -2; k <= 3; ++k) CHECK(germ_distance(iterate(h, j + k), compose(iterate(h, j), iterate(h, k))) < 1e-9);
}

TEST_CASE("parabolic order") {
  const auto po0 = parabolic_order(quadratic_germ(0.0, 8));
  CHECK(po0.q == 1);
  CHECK(std::abs(po0.a_next - 1.0) < 1e-15);
  const auto po2 = parabolic_order(iterate(quadratic_germ(RationalAngle(1, 2), 8), 2));
  CHECK(po2.q == 2);
  CHECK(std::abs(po2.a_next + 2.0) < 1e-12);
  for (int q = 3; q <= 6; ++q) {
    const auto F = iterate(quadratic_germ(RationalAngle(1, q), q + 4), q);
    const auto po = parabolic_order(F);
    CHECK(po.q == q);
    CHECK(std::abs(po.a_next) > 1e-8);
    for (int k = 1; k <= 5; ++k)
      CHECK(std::abs(iterate(F, k).coeff(q + 1) - static_cast<double>(k) * po.a_next) < 1e-9 * k);
  }
  CHECK_THROWS_AS(parabolic_order(quadratic_germ(0.25, 6)), Error);
  try {
    parabolic_order(Germ::identity(6));
    FAIL("identity has no parabolic order");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::indistinguishable_from_identity);
  }
}

TEST_CASE("commutant solve and the root-of-unity gate") {
  const auto F0 = quadratic_germ(0.0, 10);
  const auto sol = commutant_solve(F0, 1.0, 10);
  CHECK(sol.report.residual_norm < 1e-12);
  CHECK(germ_distance(sol.candidate, Germ::identity(10)) < 1e-12);
  const auto F2 = iterate(quadratic_germ(RationalAngle(1, 2), 10), 2);
  CHECK(commutant_solve(F2, -1.0, 10).report.residual_norm < 1e-12);
  try {
    commutant_solve(F0, cplx(0, 1), 10);
    FAIL("b1 = i must be rejected for q = 1");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_solution);
  }
}

TEST_CASE("r-goodness is the literal coefficient bound") {
  CHECK(is_r_good(Germ::identity(6), 0.5));
  CHECK(is_r_good(Germ::identity(6), 50.0));
  CHECK_FALSE(is_r_good(poly({1, 4}), 1.0));
  CHECK(is_r_good(quadratic_germ(0.0, 6), 1.0));
  CHECK_FALSE(is_r_good(quadratic_germ(0.0, 6), 2.0));
  CHECK_THROWS_AS(is_r_good(Germ::identity(2), 0.0), Error);
}

TEST_CASE("K sets") {
  const auto k = k_set(RationalAngle(0, 1), 1.0, -3, 3, 16);
  CHECK(std::find(k.begin(), k.end(), 0) != k.end());
  CHECK(std::find(k.begin(), k.end(), 1) != k.end());
  CHECK(std::find(k.begin(), k.end(), -1) == k.end());
  for (const auto& pq : {RationalAngle(0, 1), RationalAngle(1, 2), RationalAngle(1, 3)})
    CHECK(k_set(pq, 100.0, -6, 6, 16) == std::vector<int>{0});
  const auto w = k_set_widened(RationalAngle(0, 1), 1.0);
  CHECK_FALSE(w.capped);
  CHECK(w.members == std::vector<int>{0, 1});
}

TEST_CASE("germ JSON round trip") {
  const auto g = quadratic_germ(0.3, 5);
  const auto back = germ_from_json(json::parse(germ_to_json(g).dump()));
  CHECK(germ_distance(g, back) == 0.0);
  CHECK_THROWS_AS(germ_from_json(json::parse(R"({"order": 2})")), Error);
}

TEST_CASE("extended backend agrees with float64") {
  const auto f = quadratic_germ(RationalAngle(1, 3), 12);
  const auto a = iterate(f, 7);
  const auto b = iterate(f.cast<long double>(), 7).cast<double>();
  CHECK(germ_distance(a, b) < 1e-10);
  CHECK(GermExt::backend() == Backend::extended);
}
