#include <algorithm>
#include <cmath>
#include <numbers>

#include "germlab/centralizer.hpp"
#include "germlab/circle.hpp"

namespace germlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circle_dist(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

CirclePipeline make_pipeline(const ArnoldSystem& sys, const ParabolicCycle& cycle) {
  const auto cyc = relabel_for_critical_point(sys, cycle);
  auto map = circle_return_map(sys, cyc, 48);
  auto data = normalize(map);
  // F is evaluated through complex sines, so the Abel residual floor sits a
  // little above the polynomial case.
  FatouOptions fo;
  fo.target_accuracy = 1e-9;
  auto att = build_fatou(map, data, PetalKind::attracting, fo);
  auto rep = build_fatou(map, data, PetalKind::repelling, fo);
  auto horn = build_horn(att, rep);
  const auto crit = critical_points(sys);
  const cplx w1 = cyc.point(0);
  auto chart = [w1](cplx w) { return cplx(0, -1) * std::log(w / w1); };
  const cplx z1 = chart(crit.c1);
  const cplx z2 = chart(crit.c2);
  return CirclePipeline{sys,  cyc,           std::move(map), std::move(data), std::move(att), std::move(rep),
                        std::move(horn), crit, z1,             z2};
}

}  // namespace

CirclePipeline CirclePipeline::build(const ArnoldSystem& sys, const ParabolicCycle& cycle) {
  return make_pipeline(sys, cycle);
}

CirclePipeline CirclePipeline::at_tongue(const RationalAngle& pq, double b) {
  const auto pp = parabolic_parameter(pq, b, TongueSide::right);
  return make_pipeline(ArnoldSystem(pp.a, b), pp.cycle);
}

cplx CirclePipeline::to_chart(cplx w) const { return cplx(0, -1) * std::log(w / cycle.point(0)); }

cplx CirclePipeline::from_chart(cplx z) const { return cycle.point(0) * std::exp(cplx(0, 1) * z); }

CircleCriticalValues circle_critical_values(const CirclePipeline& pipe, int budget) {
  CircleCriticalValues out;
  out.phi1 = extend_attracting(pipe.att, pipe.z_c1, budget);
  out.phi2 = extend_attracting(pipe.att, pipe.z_c2, budget);
  out.v1 = std::exp(cplx(0, kTwoPi) * out.phi1);
  out.v2 = std::exp(cplx(0, kTwoPi) * out.phi2);
  out.arg_defect = kTwoPi * circle_dist(out.phi1.real() - out.phi2.real());
  return out;
}

double tau_symmetry_residual(const CirclePipeline& pipe, int count) {
  // τ(w) = 1/conj(w) is z ↦ conj(z) in the chart.
  double worst = 0;
  for (const cplx z : petal_samples(pipe.att, pipe.data.s_att + 2.0, count))
    worst = std::max(worst, std::abs(pipe.att.eval_phi(std::conj(z)) - std::conj(pipe.att.eval_phi(z))));
  return worst;
}

CircleCentralizerVerdict circle_centralizer_test(const CirclePipeline& pipe, const CircleMap& g,
                                                 const CircleCentralizerOptions& opts) {
  const auto& sys = pipe.sys;
  const int n = pipe.cycle.period;
  CircleCentralizerVerdict v;

  constexpr int kCircle = 256;
  for (int j = 0; j < kCircle; ++j) {
    const cplx w = std::polar(1.0, kTwoPi * j / kCircle);
    v.commutation = std::max(v.commutation, std::abs(sys.complexified(g(w)) - g(sys.complexified(w))));
  }
  if (v.commutation > opts.commute_tol)
    throw Error(ErrorCode::not_a_centralizer_candidate, "map does not commute with f on the circle");

  const cplx w1 = pipe.cycle.point(0);
  const cplx gw = g(w1);
  int found = -1;
  cplx img = gw;
  for (int k = 0; k < n; ++k) {
    if (std::abs(img - w1) < opts.cycle_tol) {
      found = k;
      break;
    }
    img = sys.complexified(img);
  }
  if (found < 0) throw Error(ErrorCode::not_commuting, "g(w1) is not on the parabolic cycle");
  v.k = found;

  const int k = found;
  const PlaneMap big_g = [&sys, &g, w1, k](cplx z) {
    const cplx w = sys.complexified_iterate(g(w1 * std::exp(cplx(0, 1) * z)), k);
    return cplx(0, -1) * std::log(w / w1);
  };

  // Taylor coefficients of G at 0 by the Cauchy integral on a small circle.
  constexpr int kCauchy = 64;
  cplx c1{}, c2{};
  for (int j = 0; j < kCauchy; ++j) {
    const cplx e = std::polar(1.0, kTwoPi * j / kCauchy);
    const cplx val = big_g(opts.jet_radius * e);
    c1 += val / e;
    c2 += val / (e * e);
  }
  v.b1 = c1 / (kCauchy * opts.jet_radius);
  v.b2 = c2 / (kCauchy * opts.jet_radius * opts.jet_radius);

  const cplx a2 = pipe.map.jet().coeff(2);
  const bool tangent = std::abs(v.b1 - 1.0) < opts.identity_tol * 10;
  const bool is_identity = tangent && std::abs(v.b2) < opts.identity_tol;
  v.multiplicity_ok = tangent && (is_identity || std::abs(v.b2) > opts.identity_tol);
  v.mu = is_identity ? cplx{} : v.b2 / a2;
  const double rounded = std::round(v.mu.real());
  v.mu_distance = std::abs(v.mu - rounded);

  const auto crit = circle_critical_values(pipe);
  v.critical_arg_defect = crit.arg_defect;
  v.re_mu_integer = std::abs(v.mu.real() - rounded) < opts.integer_tol && crit.arg_defect < 1e-6;
  v.im_mu_zero = std::abs(v.mu.imag()) < opts.integer_tol;
  v.tau_defect = tau_symmetry_residual(pipe);

  const double reach = 2.0 * std::abs(v.mu) + 4.0;
  v.translation_att =
      translation_residual(pipe.att, big_g, v.mu, petal_samples(pipe.att, pipe.data.s_att + reach, opts.samples));
  v.translation_rep =
      translation_residual(pipe.rep, big_g, v.mu, petal_samples(pipe.rep, pipe.data.s_rep + reach, opts.samples));
  if (opts.horn)
    v.horn_rotation = rotation_commutation_residual(pipe.horn, v.mu, horn_samples(pipe.horn, opts.samples));

  if (v.re_mu_integer && v.im_mu_zero && v.multiplicity_ok) {
    const std::int64_t m = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(rounded) - k;
    constexpr int kCheck = 64;
    for (int j = 0; j < kCheck; ++j) {
      const double x = static_cast<double>(j) / kCheck;
      const cplx target = std::polar(1.0, kTwoPi * sys.lift_iterate(x, static_cast<int>(m)));
      v.power_distance = std::max(v.power_distance, std::abs(g(std::polar(1.0, kTwoPi * x)) - target));
    }
    if (v.power_distance < opts.map_tol) v.identified_power = m;
  }
  return v;
}

}  // namespace germlab
