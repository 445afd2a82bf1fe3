#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "germlab/centralizer.hpp"

using namespace germlab;

namespace {

const QuadraticPipeline& pipe0() { return *QuadraticPipeline::get(RationalAngle(0, 1)); }

cplx sample_point(const HornMap& hm, double x, double dy) {
  return {-hm.strip().t - hm.strip().width * (1 - x), hm.height() + dy};
}

}  // namespace

TEST_CASE("horn map commutes with translation by one") {
  const auto& hm = pipe0().horn;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const cplx w = sample_point(hm, (i + 0.5) / 50, 0.25 + 0.05 * i);
    worst = std::max(worst, std::abs(hm.eval(w + 1.0) - hm.eval(w) - 1.0));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("Im h grows along a vertical") {
  const auto& hm = pipe0().horn;
  double prev = -1e9;
  for (double dy = 0.25; dy <= 6.0; dy += 0.5) {
    const double im = hm.eval(sample_point(hm, 0.5, dy)).imag();
    CHECK(im > prev);
    prev = im;
  }
  // Asymptotically h is a translation, so Im h gains one per unit of height.
  const double gain = hm.eval(sample_point(hm, 0.5, 6.0)).imag() - hm.eval(sample_point(hm, 0.5, 4.0)).imag();
  CHECK(std::abs(gain - 2.0) < 1e-2);
}

TEST_CASE("H has a removable singularity at 0") {
  const auto& hm = pipe0().horn;
  double prev = 1e9;
  for (double r : {1e-3, 1e-5, 1e-7}) {
    const cplx xi = std::polar(r * hm.rho0(), 0.7);
    const double m = std::abs(hm.induced(xi));
    CHECK(m < prev);
    prev = m;
  }
  CHECK(hm.induced(0.0) == cplx(0));
  CHECK_THROWS_AS(hm.induced(2.0 * hm.rho0()), Error);
}

TEST_CASE("critical values of z + z^2 reduce to one cylinder value") {
  const auto crit = quadratic_critical_structure(pipe0().att, RationalAngle(0, 1));
  CHECK(crit.critical_points.size() >= 5);
  CHECK(crit.spread <= 1e-6);
  CHECK(crit.level_defect <= 1e-6);
}

TEST_CASE("rotation symmetry residuals") {
  const auto& hm = pipe0().horn;
  const auto samples = horn_samples(hm, 16);
  CHECK(rotation_commutation_residual(hm, 0.0, samples) < 1e-14);
  CHECK(rotation_commutation_residual(hm, 1.0, samples) <= 2 * hm.accuracy());
  CHECK(rotation_commutation_residual(hm, 2.0, samples) <= 2 * hm.accuracy());
  CHECK(rotation_commutation_residual(hm, 0.5, samples) > 1e-3);
}

TEST_CASE("cylinder distance") {
  CHECK(cylinder_distance(cplx(0.1, 2), cplx(3.1, 2)) < 1e-12);
  CHECK(std::abs(cylinder_distance(cplx(0.9, 0), cplx(0.1, 0)) - 0.2) < 1e-12);
}
