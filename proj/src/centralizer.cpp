#include "germlab/centralizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace germlab {

namespace {

constexpr int kPipelineOrder = 64;

double max_coeff(const Germ& g) {
  double m = 0;
  for (const auto& c : g.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

std::shared_ptr<const QuadraticPipeline> build_pipeline(const RationalAngle& pq) {
  auto map = AnalyticMap::quadratic_return_map(pq, kPipelineOrder);
  auto data = normalize(map);
  auto att = build_fatou(map, data, PetalKind::attracting);
  auto rep = build_fatou(map, data, PetalKind::repelling);
  auto horn = build_horn(att, rep);
  return std::make_shared<const QuadraticPipeline>(QuadraticPipeline{
      pq, quadratic_germ(pq, kPipelineOrder), std::move(map), std::move(data), std::move(att), std::move(rep),
      std::move(horn)});
}

}  // namespace

std::shared_ptr<const QuadraticPipeline> QuadraticPipeline::get(const RationalAngle& pq) {
  static std::mutex mutex;
  static std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const QuadraticPipeline>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{pq.p, pq.q}];
  if (!slot) slot = build_pipeline(pq);
  return slot;
}

std::vector<cplx> petal_samples(const FatouCoordinate& fc, double t, int count) {
  std::vector<cplx> out;
  const double sign = fc.kind() == PetalKind::attracting ? 1.0 : -1.0;
  for (int i = 0; i < count; ++i) {
    const double x = 1.0 + 3.0 * static_cast<double>(i % 4) / 3.0;
    const double y = count > 1 ? -t + 2.0 * t * i / (count - 1) : 0.0;
    out.push_back(inverse_branch(fc.data(), fc.kind(), cplx(sign * (t + x), y)));
  }
  return out;
}

double translation_residual(const FatouCoordinate& fc, const PlaneMap& g, cplx mu, const std::vector<cplx>& samples) {
  double worst = 0;
  for (const cplx z : samples) {
    const auto target = fc.inverse(fc.eval_phi(z) + mu);
    if (!target) throw Error(ErrorCode::inversion_failed, "φ⁻¹(φ(z) + μ) did not converge");
    worst = std::max(worst, std::abs(g(z) - *target));
  }
  return worst;
}

CentralizerVerdict centralizer_test(const RationalAngle& pq, const Germ& g, const CentralizerOptions& opts) {
  const int q = static_cast<int>(pq.q);
  const int n = g.order();
  if (n < q + 1) throw Error(ErrorCode::invalid_order, "germ order must exceed q to read b_{q+1}");
  const Germ qg = quadratic_germ(pq, n);

  CentralizerVerdict v;
  v.order = n;
  v.residuals.commutation = commutator_norm(qg, g) / std::max(1.0, max_coeff(g));
  if (v.residuals.commutation > opts.commute_tol)
    throw Error(ErrorCode::not_a_centralizer_candidate, "germ does not commute with Q_{p/q} to the requested order");

  v.b1 = g.coeff(1);
  if (std::abs(std::pow(v.b1, q) - 1.0) > opts.root_tol)
    throw Error(ErrorCode::not_commuting, "g'(0)^q != 1, so g cannot commute with Q at higher order");

  const cplx lambda = qg.coeff(1);
  double best = 1e300;
  cplx lj = 1.0;
  for (int j = 0; j < q; ++j) {
    const double d = std::abs(lj * v.b1 - 1.0);
    if (d < best) {
      best = d;
      v.j = j;
    }
    lj *= lambda;
  }

  const Germ big_g = compose(iterate(qg, v.j), g);
  const auto pipe = QuadraticPipeline::get(pq);
  const cplx a_next = pipe->data.a_next;

  // Rounding in coefficient k scales with the size of g's coefficients up to k.
  std::vector<double> tol(n + 1, opts.identity_tol);
  double running = 1.0;
  for (int k = 1; k <= n; ++k) {
    running = std::max(running, std::abs(g.coeff(k)));
    tol[k] = opts.identity_tol * running;
  }
  bool is_identity = true;
  for (int k = 2; k <= n; ++k) is_identity = is_identity && std::abs(big_g.coeff(k)) <= tol[k];
  bool low_vanish = true;
  for (int k = 2; k <= q; ++k) low_vanish = low_vanish && std::abs(big_g.coeff(k)) <= tol[k];
  v.mu = is_identity ? cplx{} : big_g.coeff(q + 1) / a_next;
  v.multiplicity_ok = is_identity || (low_vanish && std::abs(big_g.coeff(q + 1)) > tol[q + 1]);

  const double rounded = std::round(v.mu.real());
  v.mu_distance = std::abs(v.mu - rounded);
  v.mu_is_integer = v.mu_distance < opts.integer_tol;

  // Residuals on petals deep enough that G maps the samples into the
  // domain of φ.
  const int j = v.j;
  const PlaneMap eval_g = [&g, &qg, j](cplx z) {
    cplx w = g(z);
    for (int i = 0; i < j; ++i) w = qg(w);
    return w;
  };
  const double reach = 2.0 * std::abs(v.mu) + 4.0;
  const auto att_samples = petal_samples(pipe->att, pipe->data.s_att + reach, opts.samples);
  const auto rep_samples = petal_samples(pipe->rep, pipe->data.s_rep + reach, opts.samples);
  v.residuals.translation_att = translation_residual(pipe->att, eval_g, v.mu, att_samples);
  v.residuals.translation_rep = translation_residual(pipe->rep, eval_g, v.mu, rep_samples);
  for (const cplx z : att_samples) {
    v.residuals.fatou_att = std::max(
        v.residuals.fatou_att, std::abs(pipe->att.evaluate_raw(eval_g(z)).value - pipe->att.eval_phi(z) - v.mu));
  }
  if (opts.horn) {
    v.residuals.horn_rotation =
        rotation_commutation_residual(pipe->horn, v.mu, horn_samples(pipe->horn, opts.samples));
  }

  if (v.mu_is_integer && v.multiplicity_ok) {
    const std::int64_t m = static_cast<std::int64_t>(q) * static_cast<std::int64_t>(rounded) - v.j;
    const Germ candidate = iterate(qg, static_cast<int>(m));
    v.power_distance = germ_distance(candidate, g) / std::max(1.0, max_coeff(candidate));
    if (v.power_distance < opts.germ_tol) v.identified_power = m;
  }
  return v;
}

}  // namespace germlab
