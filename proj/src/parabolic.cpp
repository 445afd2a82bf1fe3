#include "germlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace germlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

AnalyticMap::AnalyticMap(Eval eval, Germ jet, double escape_radius, std::optional<double> period)
    : eval_(std::move(eval)), jet_(std::move(jet)), escape_radius_(escape_radius), period_(period) {}

AnalyticMap AnalyticMap::from_germ(const Germ& g, double escape_radius) {
  return AnalyticMap(
      [g](cplx z) {
        const auto [v, d] = g.eval_with_derivative(z);
        return MapJet{v, d};
      },
      g, escape_radius);
}

AnalyticMap AnalyticMap::quadratic_return_map(const RationalAngle& pq, int jet_order) {
  const int q = static_cast<int>(pq.q);
  const int order = std::max({jet_order, (1 << std::min(q, 20)) + 1, 14 * q + 9});
  const Germ qg = quadratic_germ(pq, order);
  const cplx lambda = qg.coeff(1);
  return AnalyticMap(
      [lambda, q](cplx z) {
        cplx d = 1.0;
        for (int i = 0; i < q; ++i) {
          d *= lambda + 2.0 * z;
          z = z * (lambda + z);
        }
        return MapJet{z, d};
      },
      iterate(qg, q), 2.0);
}

std::optional<cplx> AnalyticMap::inverse_near_zero(cplx y, int max_iter) const {
  cplx w = y - ((*this)(y) - y);
  double prev = 1e300;
  for (int it = 0; it < max_iter; ++it) {
    const auto [v, d] = eval(w);
    if (d == 0.0) return std::nullopt;
    const cplx step = (v - y) / d;
    w -= step;
    const double size = std::abs(step);
    if (size <= 4e-16 * std::abs(w) || size < 1e-300) return w;
    // Stagnation at the rounding floor of F.
    if (size <= 1e-12 * std::abs(w) && size >= 0.5 * prev) return w;
    prev = size;
  }
  const auto [v, d] = eval(w);
  if (std::abs(v - y) <= 1e-12 * std::abs(y)) return w;
  return std::nullopt;
}

std::string_view to_string(PetalKind kind) { return kind == PetalKind::attracting ? "att" : "rep"; }

PetalKind petal_kind_from_string(std::string_view name) {
  if (name == "att" || name == "attracting") return PetalKind::attracting;
  if (name == "rep" || name == "repelling") return PetalKind::repelling;
  throw Error(ErrorCode::invalid_argument, "unknown petal kind '" + std::string(name) + "'");
}

cplx coord_I(const ParabolicData& data, cplx z) {
  if (z == 0.0) throw Error(ErrorCode::outside_domain, "I is undefined at 0");
  return -1.0 / (static_cast<double>(data.q) * data.a_next * std::pow(z, data.q));
}

bool in_direction_sector(cplx z, cplx v, double half_angle) {
  if (z == 0.0) return false;
  return std::abs(std::arg(z / v)) <= half_angle;
}

cplx inverse_branch(const ParabolicData& data, PetalKind kind, cplx zeta, double s) {
  const SectorSpec sector{kind, s};
  if (!sector.contains(zeta))
    throw Error(ErrorCode::outside_domain, "point outside the sector of the inverse branch");
  // I(v w) = w^{-q} for the attracting vector and I(v_rep w) = -w^{-q}.
  const double inv_q = -1.0 / data.q;
  if (kind == PetalKind::attracting) return data.v_att * std::pow(zeta, inv_q);
  return data.v_rep * std::pow(-zeta, inv_q);
}

bool in_petal(const ParabolicData& data, PetalKind kind, cplx z, double s) {
  if (z == 0.0) return false;
  if (!in_direction_sector(z, data.vector(kind), kPi / data.q)) return false;
  return SectorSpec{kind, s}.contains(coord_I(data, z));
}

LiftedMap::LiftedMap(AnalyticMap f, ParabolicData data, PetalKind kind)
    : f_(std::move(f)), data_(std::move(data)), kind_(kind) {}

cplx LiftedMap::evaluate_unchecked(cplx zeta) const {
  const cplx z = inverse_branch(data_, kind_, zeta);
  const cplx w = f_(z);
  if (!in_direction_sector(w, data_.vector(kind_), kPi / data_.q))
    throw Error(ErrorCode::branch_escape, "image left the sector of the inverse branch");
  return coord_I(data_, w);
}

cplx LiftedMap::operator()(cplx zeta) const {
  if (!sector().contains(zeta)) throw Error(ErrorCode::outside_domain, "point outside the certified sector");
  return evaluate_unchecked(zeta);
}

LiftedMap lift(const AnalyticMap& f, const ParabolicData& data, PetalKind kind) {
  return LiftedMap(f, data, kind);
}

namespace {

// F(W' ∩ B(0, δ)) ⊂ W for the sector around v, sampled on a polar grid.
bool ball_ok(const AnalyticMap& f, cplx v, int q, double delta, int grid) {
  const double half_w = kPi / q;
  const double half_wp = half_w - kPi / (4.0 * q);
  const cplx dir = v / std::abs(v);
  for (int i = 1; i <= grid; ++i) {
    const double rho = delta * static_cast<double>(i) / grid;
    for (int j = 0; j <= grid; ++j) {
      const double th = -half_wp + 2.0 * half_wp * j / grid;
      const cplx z = rho * dir * std::polar(1.0, th);
      const cplx w = f(z);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
      if (!in_direction_sector(w, v, half_w)) return false;
    }
  }
  return true;
}

// Samples of Ω^s in kinked coordinates ζ = (s - |y| + x) + i y for attracting
// sectors (mirrored for repelling ones).
template <class Fn>
bool for_sector_grid(PetalKind kind, double s, int grid, Fn&& fn) {
  const double extent = 4.0 * s + 4.0;
  for (int i = 0; i < grid; ++i) {
    const double x = extent * std::pow(static_cast<double>(i) / (grid - 1), 2);
    for (int j = 0; j < grid; ++j) {
      const double y = -extent + 2.0 * extent * j / (grid - 1);
      const double re = s - std::abs(y) + x + 1e-9 * s;
      const cplx zeta = kind == PetalKind::attracting ? cplx(re, y) : cplx(-re, y);
      if (!fn(zeta)) return false;
    }
  }
  return true;
}

bool sector_ok(const LiftedMap& lifted, double s, int grid) {
  return for_sector_grid(lifted.kind(), s, grid, [&](cplx zeta) {
    try {
      const cplx img = lifted.evaluate_unchecked(zeta);
      return std::abs(img - (zeta + 1.0)) <= 0.25;
    } catch (const Error&) {
      return false;
    }
  });
}

}  // namespace

ParabolicData normalize(const AnalyticMap& f, const NormalizeOptions& opts) {
  const auto po = parabolic_order(f.jet(), opts.tol);
  ParabolicData data;
  data.q = po.q;
  data.a_next = po.a_next;
  const int q = po.q;

  // Principal q-th root of -1/(q a) with argument in (-π/q, π/q].
  const cplx target = -1.0 / (static_cast<double>(q) * po.a_next);
  double th = std::arg(target);
  if (th <= -kPi) th = kPi;
  data.v_att = std::polar(std::pow(std::abs(target), 1.0 / q), th / q);
  data.v_rep = std::polar(1.0, -kPi / q) * data.v_att;

  double delta = std::min(std::abs(data.v_att), 0.5 * f.escape_radius());
  int halvings = 0;
  while (!(ball_ok(f, data.v_att, q, delta, opts.grid) && ball_ok(f, data.v_rep, q, delta, opts.grid))) {
    if (++halvings > opts.max_halvings) {
      std::ostringstream msg;
      msg << "no ball radius certified sector containment down to delta=" << delta;
      throw Error(ErrorCode::petal_certification_failed, msg.str());
    }
    delta *= 0.5;
  }
  data.ball_radius = delta;

  const double r0 = std::sqrt(2.0) / (q * std::abs(po.a_next) * std::pow(delta, q));
  data.r_att = data.r_rep = r0;
  for (const auto kind : {PetalKind::attracting, PetalKind::repelling}) {
    const LiftedMap lifted(f, data, kind);
    double s = r0;
    int doublings = 0;
    while (!sector_ok(lifted, s, opts.grid)) {
      if (++doublings > opts.max_doublings) {
        std::ostringstream msg;
        msg << "no sector parameter certified |F~ - (z+1)| <= 1/4 for the " << to_string(kind)
            << " petal up to s=" << s;
        throw Error(ErrorCode::petal_certification_failed, msg.str());
      }
      s *= 2.0;
    }
    (kind == PetalKind::attracting ? data.s_att : data.s_rep) = s;
  }
  return data;
}

}  // namespace germlab
