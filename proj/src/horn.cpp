#include "germlab/horn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace germlab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};
}  // namespace

HornMap::HornMap(FatouCoordinate att, FatouCoordinate rep, StripSpec strip, int basin_budget)
    : att_(std::move(att)), rep_(std::move(rep)), strip_(strip), basin_budget_(basin_budget) {}

bool HornMap::in_domain(cplx w) const {
  const auto z = rep_.inverse(w);
  if (!z) return false;
  return basin_test(att_.map(), att_.data(), *z, basin_budget_).verdict == BasinVerdict::in_B1;
}

PhiJet HornMap::eval_jet(cplx w) const {
  const auto z = rep_.inverse(w);
  if (!z) throw Error(ErrorCode::inversion_failed, "φ_rep⁻¹ did not converge");
  PhiJet out;
  try {
    out = extend_attracting_jet(att_, *z, basin_budget_);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_in_basin || e.code() == ErrorCode::undecided)
      throw Error(ErrorCode::outside_domain, "φ_rep⁻¹(w) is not in B₁");
    throw;
  }
  // dz/dw = 1/φ_rep'(z).
  out.derivative /= rep_.evaluate_raw(*z).derivative;
  return out;
}

cplx HornMap::eval(cplx w) const {
  const auto z = rep_.inverse(w);
  if (!z) throw Error(ErrorCode::inversion_failed, "φ_rep⁻¹ did not converge");
  try {
    return extend_attracting(att_, *z, basin_budget_);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_in_basin || e.code() == ErrorCode::undecided)
      throw Error(ErrorCode::outside_domain, "φ_rep⁻¹(w) is not in B₁");
    throw;
  }
}

std::optional<cplx> HornMap::try_eval(cplx w) const {
  try {
    return eval(w);
  } catch (const Error&) {
    return std::nullopt;
  }
}

cplx HornMap::induced(cplx xi) const {
  if (xi == 0.0) return 0.0;
  if (std::abs(xi) >= rho0()) throw Error(ErrorCode::outside_domain, "|ξ| >= ρ₀");
  cplx zeta = std::log(xi) / kTwoPiI;
  // Shift into the strip; h(ζ + 1) = h(ζ) + 1 makes the choice irrelevant.
  zeta += std::floor(-strip_.t - zeta.real());
  return std::exp(kTwoPiI * eval(zeta));
}

HornMap build_horn(FatouCoordinate att, FatouCoordinate rep, const HornOptions& opts) {
  StripSpec strip{opts.t > 0 ? opts.t : 2.0 * rep.data().s_rep, opts.width};
  HornMap hm(std::move(att), std::move(rep), strip, opts.basin_budget);

  double top = opts.y_top > 0 ? opts.y_top : strip.t + hm.att().data().s_att + 10.0;
  std::vector<double> columns;
  for (int c = 0; c < opts.columns; ++c)
    columns.push_back(-strip.t - strip.width * (c + 0.5) / opts.columns);

  // The top of every column must lie in the domain.
  for (int tries = 0;; ++tries) {
    const bool ok = std::all_of(columns.begin(), columns.end(),
                                [&](double x) { return hm.in_domain(cplx(x, top)); });
    if (ok) break;
    if (tries >= 6) throw Error(ErrorCode::petal_certification_failed, "no horn-map domain near the strip top");
    top *= 2.0;
  }

  double highest = -top;
  for (const double x : columns) {
    double y = top;
    double crossing = -top;
    while (y - opts.step > -top) {
      const double next = y - opts.step;
      if (!hm.in_domain(cplx(x, next))) {
        double hi = y, lo = next;
        while (hi - lo > opts.bisect_tol) {
          const double mid = 0.5 * (hi + lo);
          (hm.in_domain(cplx(x, mid)) ? hi : lo) = mid;
        }
        crossing = hi;
        break;
      }
      y = next;
    }
    highest = std::max(highest, crossing);
  }
  hm.top_ = top;
  hm.height_ = highest + opts.margin;
  return hm;
}

cplx horn_eval(const HornMap& hm, cplx w) { return hm.eval(w); }
cplx induced_H(const HornMap& hm, cplx xi) { return hm.induced(xi); }

double cylinder_distance(cplx a, cplx b) {
  const cplx d = a - b;
  return std::abs(d - std::round(d.real()));
}

CriticalStructure critical_structure(const FatouCoordinate& att, cplx c1, const PreimageFn& preimages, int depth,
                                     int max_points, int budget) {
  const auto& f = att.map();
  const auto& data = att.data();
  if (basin_test(f, data, c1, budget).verdict != BasinVerdict::in_B1)
    throw Error(ErrorCode::critical_point_not_found, "c₁ is not in the basin");

  CriticalStructure cs;
  const cplx base = extend_attracting(att, c1, budget);
  std::deque<std::pair<cplx, int>> queue{{c1, 0}};
  while (!queue.empty() && static_cast<int>(cs.critical_points.size()) < max_points) {
    const auto [z, k] = queue.front();
    queue.pop_front();
    cplx value;
    try {
      value = extend_attracting(att, z, budget);
    } catch (const Error&) {
      continue;
    }
    cs.critical_points.push_back(z);
    cs.depths.push_back(k);
    cs.critical_values.push_back(value);
    cs.modded_values.push_back(value - std::floor(value.real()));
    cs.h_values.push_back(std::exp(kTwoPiI * value));
    cs.spread = std::max(cs.spread, cylinder_distance(value, base));
    cs.level_defect = std::max(cs.level_defect, std::abs(value + static_cast<double>(k) - base));
    if (k >= depth) continue;
    for (const cplx w : preimages(z)) {
      // Preimages outside the basin have no preimages in it either. For q > 1
      // the accepted points can lie in preimage components of B₁; φ_att still
      // takes the values φ_att(c₁) - k there.
      if (basin_test(f, data, w, budget).verdict == BasinVerdict::in_B1) queue.emplace_back(w, k + 1);
    }
  }
  if (cs.critical_points.empty()) throw Error(ErrorCode::critical_point_not_found, "no critical points sampled");
  return cs;
}

PreimageFn quadratic_preimages(const RationalAngle& pq) {
  const cplx lambda = quadratic_germ(pq, 2).coeff(1);
  const int q = static_cast<int>(pq.q);
  return [lambda, q](cplx y) {
    // Q(z) = z² + λz = y ⇔ z = (-λ ± √(λ² + 4y))/2.
    std::vector<cplx> level{y};
    for (int i = 0; i < q; ++i) {
      std::vector<cplx> next;
      for (const cplx v : level) {
        const cplx r = std::sqrt(lambda * lambda + 4.0 * v);
        next.push_back(0.5 * (-lambda + r));
        next.push_back(0.5 * (-lambda - r));
      }
      level = std::move(next);
    }
    return level;
  };
}

cplx quadratic_critical_point(const AnalyticMap& f, const ParabolicData& data, const RationalAngle& pq,
                              int budget) {
  // Q'(z) = λ + 2z vanishes at -λ/2; critical points of F are its preimages
  // under Q^{∘i}, 0 <= i < q.
  const cplx lambda = quadratic_germ(pq, 2).coeff(1);
  std::vector<cplx> level{-0.5 * lambda};
  for (std::int64_t i = 0; i < pq.q; ++i) {
    for (const cplx c : level) {
      if (basin_test(f, data, c, budget).verdict == BasinVerdict::in_B1) return c;
    }
    std::vector<cplx> next;
    for (const cplx v : level) {
      const cplx r = std::sqrt(lambda * lambda + 4.0 * v);
      next.push_back(0.5 * (-lambda + r));
      next.push_back(0.5 * (-lambda - r));
    }
    level = std::move(next);
  }
  throw Error(ErrorCode::critical_point_not_found, "no critical point of F reaches the attracting petal");
}

CriticalStructure quadratic_critical_structure(const FatouCoordinate& att, const RationalAngle& pq, int depth,
                                               int max_points) {
  const cplx c1 = quadratic_critical_point(att.map(), att.data(), pq);
  return critical_structure(att, c1, quadratic_preimages(pq), depth, max_points);
}

std::vector<cplx> horn_samples(const HornMap& hm, int count) {
  std::vector<cplx> out;
  const double rho = hm.rho0();
  for (int i = 0; i < count; ++i) {
    const double radius = rho * (0.2 + 0.6 * static_cast<double>(i % 4) / 4.0);
    out.push_back(std::polar(radius, 2.0 * kPi * (i + 0.5) / count));
  }
  return out;
}

double rotation_commutation_residual(const HornMap& hm, cplx mu, const std::vector<cplx>& samples) {
  const cplx rot = std::exp(kTwoPiI * mu);
  double worst = 0;
  int used = 0;
  for (const cplx xi : samples) {
    const cplx r = rot * xi;
    if (std::abs(xi) >= hm.rho0() || std::abs(r) >= hm.rho0()) continue;
    // H is only determined up to linear conjugation; the relative defect is
    // invariant under that freedom.
    const cplx hx = hm.induced(xi);
    worst = std::max(worst, std::abs(hm.induced(r) - rot * hx) / std::max(std::abs(hx), 1e-300));
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::outside_domain, "no sample lies in Dom H ∩ e^{-2πiμ} Dom H");
  return worst;
}

}  // namespace germlab
