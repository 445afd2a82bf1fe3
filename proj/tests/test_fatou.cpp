#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "germlab/fatou.hpp"

using namespace germlab;

namespace {

struct Built {
  AnalyticMap map;
  ParabolicData data;
  FatouCoordinate att;
  FatouCoordinate rep;
};

const Built& built(const RationalAngle& pq) {
  static std::map<std::int64_t, Built> cache;
  const auto key = pq.p * 1000 + pq.q;
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto f = AnalyticMap::quadratic_return_map(pq);
    auto d = normalize(f);
    auto att = build_fatou(f, d, PetalKind::attracting);
    auto rep = build_fatou(f, d, PetalKind::repelling);
    it = cache.emplace(key, Built{f, d, std::move(att), std::move(rep)}).first;
  }
  return it->second;
}

}  // namespace

TEST_CASE("Abel residual on certification grids") {
  for (const auto& pq : {RationalAngle(0, 1), RationalAngle(1, 2)}) {
    const auto& b = built(pq);
    for (const auto* fc : {&b.att, &b.rep}) {
      CHECK(fc->accuracy() <= 1e-8);
      const double s = fc->data().s(fc->kind());
      double worst = 0;
      for (const cplx zeta : sector_grid(fc->kind(), s, 32, 4 * s + 8)) worst = std::max(worst, fc->abel_residual(zeta));
      CHECK(worst <= 1e-8);
    }
  }
}

TEST_CASE("Abel residual on a fresh random grid") {
  const auto& b = built(RationalAngle(1, 2));
  std::mt19937_64 rng(7);
  const double s = b.att.data().s_att;
  std::uniform_real_distribution<double> re(s + 0.5, 6 * s), im(-4 * s, 4 * s);
  double worst = 0;
  int used = 0;
  while (used < 200) {
    const cplx zeta(re(rng), im(rng));
    if (!b.att.data().sector(PetalKind::attracting).contains(zeta)) continue;
    worst = std::max(worst, b.att.abel_residual(zeta));
    ++used;
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("formal log coefficient of z + z^2") {
  const auto& b = built(RationalAngle(0, 1));
  CHECK(std::abs(b.att.asymptotic_log_coeff() - 1.0) < 1e-12);
}

TEST_CASE("normalization anchor and growth") {
  const auto& b = built(RationalAngle(0, 1));
  const double s = b.data.s_att;
  CHECK(std::abs(b.att.eval_Phi(2 * s) - 2 * s) < 1e-10);
  CHECK(std::abs(b.rep.eval_Phi(-2 * b.data.s_rep) + 2 * b.data.s_rep) < 1e-10);
  double prev = 1e9;
  for (double x : {4 * s, 16 * s, 64 * s, 256 * s}) {
    const double dev = std::abs(b.att.eval_Phi(x) / x - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("extension along the orbit") {
  const auto& b = built(RationalAngle(0, 1));
  const cplx z = inverse_branch(b.data, PetalKind::attracting, cplx(3 * b.data.s_att, 1), b.data.s_att);
  CHECK(extend_attracting(b.att, z, 100) == b.att.eval_phi(z));
  const cplx c1 = -0.5;
  const cplx ext = extend_attracting(b.att, c1, 100000);
  CHECK(std::abs(extend_attracting(b.att, b.map(c1), 100000) - ext - 1.0) < 1e-8);
  CHECK_THROWS_AS(extend_attracting(b.att, 0.01 * b.data.v_rep + 0.3, 1000), Error);
}

TEST_CASE("basin test") {
  const auto& b = built(RationalAngle(0, 1));
  CHECK(basin_test(b.map, b.data, 0.01 * b.data.v_att, 1000).verdict == BasinVerdict::in_B1);
  const auto far = basin_test(b.map, b.data, 100.0, 1000);
  CHECK(far.verdict == BasinVerdict::escaped);
  CHECK(far.steps == 0);
  const auto zero = basin_test(b.map, b.data, 0.0, 1000);
  CHECK(zero.verdict == BasinVerdict::in_B1);
  CHECK(zero.steps == 0);
}

TEST_CASE("translation model is solved by the identity") {
  // F(z) = z/(1-z) lifts to ζ ↦ ζ + 1 exactly.
  AnalyticMap f([](cplx z) { return MapJet{z / (1.0 - z), 1.0 / ((1.0 - z) * (1.0 - z))}; },
                Germ(std::vector<cplx>(24, 1.0)), 10.0);
  const auto d = normalize(f);
  const auto att = build_fatou(f, d, PetalKind::attracting);
  for (const cplx zeta : {cplx(3 * d.s_att, 2), cplx(5 * d.s_att, -4)}) {
    CHECK(att.abel_residual(zeta) < 1e-12);
    CHECK(std::abs(att.eval_Phi(zeta) - zeta) < 1e-9);
  }
}
