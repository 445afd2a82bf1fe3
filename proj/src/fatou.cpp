#include "germlab/fatou.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace germlab {

namespace {

constexpr double kPi = std::numbers::pi;

using Series = std::vector<cplx>;

Series mul(const Series& a, const Series& b) {
  const int n = static_cast<int>(a.size()) - 1;
  Series r(n + 1, cplx{});
  for (int i = 0; i <= n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series reciprocal(const Series& a) {
  const int n = static_cast<int>(a.size()) - 1;
  Series r(n + 1, cplx{});
  r[0] = 1.0 / a[0];
  for (int m = 1; m <= n; ++m) {
    cplx acc{};
    for (int k = 1; k <= m; ++k) acc += a[k] * r[m - k];
    r[m] = -acc / a[0];
  }
  return r;
}

// log(1 + u) for u with zero constant term, via (log)' = u' / (1 + u).
Series log1p_series(const Series& one_plus_u) {
  const int n = static_cast<int>(one_plus_u.size()) - 1;
  Series du(n + 1, cplx{});
  for (int k = 1; k <= n; ++k) du[k - 1] = static_cast<double>(k) * one_plus_u[k];
  const Series q = mul(du, reciprocal(one_plus_u));
  Series r(n + 1, cplx{});
  for (int k = 1; k <= n; ++k) r[k] = q[k - 1] / static_cast<double>(k);
  return r;
}

}  // namespace

AbelExpansion abel_expansion(const Germ& jet, int q, int taylor_terms) {
  const int top = q + taylor_terms;  // highest matched order
  const int len = top + q;           // D_j needs (1+u)^{-j} to order top + j
  Series one_plus_u(len + 1, cplx{});
  one_plus_u[0] = 1.0;
  for (int k = 1; k <= len; ++k) one_plus_u[k] = jet.coeff(k + 1);
  if (std::abs(jet.coeff(1) - 1.0) > 1e-9)
    throw Error(ErrorCode::not_tangent_to_identity, "Abel expansion needs multiplier +1");
  const cplx a = one_plus_u[q];
  if (a == 0.0) throw Error(ErrorCode::invalid_argument, "a_{q+1} vanishes");

  const Series inv = reciprocal(one_plus_u);

  // Each unknown contributes a series with a single leading order; solve the
  // triangular system Σ unknown·series = 1 + O(z^{top+1}).
  Series acc(top + 1, cplx{});
  auto solve_for = [&](const Series& basis, int lead) {
    const cplx x = ((lead == 0 ? 1.0 : 0.0) - acc[lead]) / basis[lead];
    for (int m = 0; m <= top; ++m) acc[m] += x * basis[m];
    return x;
  };

  AbelExpansion e;
  e.q = q;
  e.laurent.assign(q, cplx{});
  Series inv_pow(len + 1, cplx{});
  inv_pow[0] = 1.0;
  std::vector<Series> d_basis(q + 1);
  for (int j = 1; j <= q; ++j) {
    inv_pow = mul(inv_pow, inv);
    Series d(top + 1, cplx{});
    for (int m = 0; m <= top; ++m) d[m] = inv_pow[m + j];
    d_basis[j] = std::move(d);
  }
  for (int m = 0; m < q; ++m) {
    const int j = q - m;
    e.laurent[j - 1] = solve_for(d_basis[j], m);
  }

  Series lg = log1p_series(one_plus_u);
  lg.resize(top + 1);
  e.log_coeff = solve_for(lg, q);

  e.taylor.assign(taylor_terms, cplx{});
  Series pw(len + 1, cplx{});
  pw[0] = 1.0;
  for (int k = 1; k <= taylor_terms; ++k) {
    pw = mul(pw, one_plus_u);
    Series basis(top + 1, cplx{});
    for (int m = k; m <= top; ++m) basis[m] = pw[m - k];
    basis[k] = 0.0;  // z^k ((1+u)^k - 1)
    e.taylor[k - 1] = solve_for(basis, q + k);
  }
  return e;
}

cplx AbelExpansion::value(cplx z, cplx log_ref) const {
  const cplx inv = 1.0 / z;
  cplx lau{};
  for (int j = q; j >= 1; --j) lau = (lau + laurent[j - 1]) * inv;
  cplx tay{};
  for (int k = static_cast<int>(taylor.size()); k >= 1; --k) tay = (tay + taylor[k - 1]) * z;
  return lau + log_coeff * std::log(z / log_ref) + tay;
}

cplx AbelExpansion::derivative(cplx z) const {
  const cplx inv = 1.0 / z;
  cplx d = log_coeff * inv;
  cplx p = inv;
  for (int j = 1; j <= q; ++j) {
    p *= inv;
    d -= static_cast<double>(j) * laurent[j - 1] * p;
  }
  cplx tay{};
  for (int k = static_cast<int>(taylor.size()); k >= 1; --k)
    tay = tay * z + static_cast<double>(k) * taylor[k - 1];
  return d + tay;
}

std::string_view to_string(BasinVerdict verdict) {
  switch (verdict) {
    case BasinVerdict::in_B1: return "in_B1";
    case BasinVerdict::escaped: return "escaped";
    case BasinVerdict::undecided: return "undecided";
  }
  return "undecided";
}

cplx reduce_period(const AnalyticMap& f, cplx z) {
  if (!f.period()) return z;
  const double t = *f.period();
  return z - t * std::round(z.real() / t);
}

std::vector<cplx> sector_grid(PetalKind kind, double s, int n, double extent) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 + extent * static_cast<double>(i) / std::max(1, n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = -extent + 2.0 * extent * j / std::max(1, n - 1);
      const double re = s - std::abs(y) + x;
      pts.push_back(kind == PetalKind::attracting ? cplx(re, y) : cplx(-re, y));
    }
  }
  return pts;
}

bool FatouCoordinate::deep(cplx z) const {
  if (z == 0.0 || !in_direction_sector(z, data_.vector(kind_), kPi / data_.q)) return false;
  return SectorSpec{kind_, stop_s_}.contains(coord_I(data_, z));
}

PhiJet FatouCoordinate::evaluate_raw(cplx z) const {
  cplx chain = 1.0;
  int n = 0;
  const cplx ref = data_.vector(kind_);
  if (kind_ == PetalKind::attracting) {
    while (true) {
      const cplx zr = reduce_period(f_, z);
      if (deep(zr)) {
        z = zr;
        break;
      }
      if (n >= max_depth_)
        throw Error(ErrorCode::iteration_budget_exhausted, "forward orbit did not reach the deep petal");
      if (!std::isfinite(zr.real()) || !std::isfinite(zr.imag()) || std::abs(zr) > f_.escape_radius())
        throw Error(ErrorCode::not_in_basin, "forward orbit escaped");
      const auto jet = f_.eval(z);
      chain *= jet.derivative;
      z = jet.value;
      ++n;
    }
    return {expansion_.value(z, ref) - static_cast<double>(n) + offset_, expansion_.derivative(z) * chain, n};
  }
  while (!deep(z)) {
    if (n >= max_depth_)
      throw Error(ErrorCode::iteration_budget_exhausted, "backward orbit did not reach the deep petal");
    const auto w = f_.inverse_near_zero(z);
    if (!w) throw Error(ErrorCode::inversion_failed, "inverse branch of F failed");
    chain /= f_.eval(*w).derivative;
    z = *w;
    ++n;
  }
  return {expansion_.value(z, ref) + static_cast<double>(n) + offset_, expansion_.derivative(z) * chain, n};
}

PhiJet FatouCoordinate::eval_phi_jet(cplx z) const {
  if (!in_petal(data_, kind_, z, data_.s(kind_)))
    throw Error(ErrorCode::outside_petal, "point outside the certified petal");
  return evaluate_raw(z);
}

cplx FatouCoordinate::eval_phi(cplx z) const { return eval_phi_jet(z).value; }

cplx FatouCoordinate::eval_Phi(cplx zeta) const {
  if (!data_.sector(kind_).contains(zeta)) throw Error(ErrorCode::outside_domain, "ζ outside Ω^s");
  return evaluate_raw(inverse_branch(data_, kind_, zeta)).value;
}

double FatouCoordinate::abel_residual(cplx zeta) const {
  const cplx z = inverse_branch(data_, kind_, zeta);
  const cplx fz = f_(z);
  return std::abs(evaluate_raw(fz).value - evaluate_raw(z).value - 1.0);
}

cplx FatouCoordinate::asym_inverse(cplx u) const {
  const cplx ref = data_.vector(kind_);
  cplx z = inverse_branch(data_, kind_, u);
  for (int it = 0; it < 50; ++it) {
    const cplx step = (expansion_.value(z, ref) - u) / expansion_.derivative(z);
    z -= step;
    if (std::abs(step) <= 1e-15 * std::abs(z)) break;
  }
  return z;
}

std::optional<cplx> FatouCoordinate::inverse(cplx w) const {
  try {
    const cplx u0 = w - offset_;
    cplx z;
    if (kind_ == PetalKind::attracting) {
      const int n = std::max(0, static_cast<int>(std::ceil(2.0 * stop_s_ - u0.real())));
      z = asym_inverse(u0 + static_cast<double>(n));
      for (int i = 0; i < n; ++i) {
        const auto prev = f_.inverse_near_zero(z);
        if (!prev) return std::nullopt;
        z = *prev;
      }
      if (!in_petal(data_, kind_, reduce_period(f_, z), 0.5 * data_.s(kind_))) return z;
    } else {
      const int n = std::max(0, static_cast<int>(std::ceil(2.0 * stop_s_ + u0.real())));
      z = asym_inverse(u0 - static_cast<double>(n));
      for (int i = 0; i < n; ++i) z = f_(z);
      if (!in_petal(data_, kind_, z, 0.5 * data_.s(kind_))) return z;
    }
    // Inside the petal the orbit definition is unambiguous; polish by Newton.
    for (int it = 0; it < 4; ++it) {
      const auto jet = evaluate_raw(z);
      const cplx step = (jet.value - w) / jet.derivative;
      z -= step;
      if (std::abs(step) <= 1e-14 * std::abs(z)) break;
    }
    if (std::abs(evaluate_raw(z).value - w) > 1e-8 * std::max(1.0, std::abs(w))) return std::nullopt;
    return z;
  } catch (const Error&) {
    return std::nullopt;
  }
}

FatouCoordinate build_fatou(const AnalyticMap& f, const ParabolicData& data, PetalKind kind,
                            const FatouOptions& opts) {
  FatouCoordinate fc(f, data, kind);
  const int q = data.q;
  const int terms = opts.taylor_terms > 0 ? opts.taylor_terms : 12 * q + 8;
  if (f.jet().order() < 2 * q + terms + 1)
    throw Error(ErrorCode::invalid_order, "jet order too small for the Abel expansion");
  fc.expansion_ = abel_expansion(f.jet(), q, terms);
  fc.max_depth_ = opts.max_depth;

  // Defect of the truncated expansion starts at order q+terms+1; bound the
  // tail Σ_n defect(z_n) ~ c |z|^m · R q/(m - q) at |ζ| ≈ R.
  const int m = q + terms + 1;
  const double qa = q * std::abs(data.a_next);
  const cplx ref = data.vector(kind);
  double defect_coeff = 0;
  {
    // Numerical defect at a probe point calibrates the leading coefficient.
    const double probe = 16.0 * std::max(1.0, data.s(kind));
    const cplx z = inverse_branch(data, kind, kind == PetalKind::attracting ? cplx(probe, 0) : cplx(-probe, 0));
    const double defect = std::abs(fc.expansion_.value(f(z), ref) - fc.expansion_.value(z, ref) - 1.0);
    defect_coeff = defect / std::pow(std::abs(z), m);
  }
  double stop = std::max(4.0, data.s(kind));
  for (int i = 0; i < 40; ++i) {
    const double zr = std::pow(qa * stop / std::sqrt(2.0), -1.0 / q);
    const double tail = defect_coeff * std::pow(zr, m) * stop * q / (m - q);
    if (tail < 0.01 * opts.target_accuracy) break;
    stop *= 2.0;
  }
  fc.stop_s_ = stop;

  // Normalization Φ(ζ_base) = ζ_base at ζ_base = ±2s.
  const double base = 2.0 * data.s(kind);
  fc.anchor_ = kind == PetalKind::attracting ? cplx(base, 0) : cplx(-base, 0);
  fc.offset_ = 0.0;
  fc.offset_ = fc.anchor_ - fc.evaluate_raw(inverse_branch(data, kind, fc.anchor_)).value;

  double worst = 0;
  const double s_cert = kind == PetalKind::attracting ? data.s(kind) : data.s(kind) + 2.0;
  for (const cplx zeta : sector_grid(kind, s_cert, opts.cert_grid, 4.0 * s_cert + 4.0))
    worst = std::max(worst, fc.abel_residual(zeta));
  if (!(worst <= opts.target_accuracy)) {
    std::ostringstream msg;
    msg << "Abel residual " << worst << " exceeds the target " << opts.target_accuracy;
    throw Error(worst < 1e-6 ? ErrorCode::needs_extended_precision : ErrorCode::petal_certification_failed,
                msg.str());
  }
  fc.accuracy_ = std::max(worst, opts.target_accuracy);
  return fc;
}

PhiJet extend_attracting_jet(const FatouCoordinate& att, cplx z, int budget) {
  const auto& f = att.map();
  const auto& data = att.data();
  cplx chain = 1.0;
  for (int k = 0;; ++k) {
    const cplx zr = reduce_period(f, z);
    if (in_petal(data, PetalKind::attracting, zr, data.s_att)) {
      auto jet = att.evaluate_raw(zr);
      return {jet.value - static_cast<double>(k), jet.derivative * chain, jet.steps + k};
    }
    if (!std::isfinite(zr.real()) || !std::isfinite(zr.imag()) || std::abs(zr) > f.escape_radius())
      throw Error(ErrorCode::not_in_basin, "orbit left the defining disk");
    if (k >= budget) throw Error(ErrorCode::undecided, "orbit did not reach the petal within budget");
    const auto jet = f.eval(z);
    chain *= jet.derivative;
    z = jet.value;
  }
}

cplx extend_attracting(const FatouCoordinate& att, cplx z, int budget) {
  return extend_attracting_jet(att, z, budget).value;
}

BasinQuery basin_test(const AnalyticMap& f, const ParabolicData& data, cplx z, int budget) {
  BasinQuery out;
  out.point = z;
  const int q = data.q;
  for (int k = 0;; ++k) {
    const cplx zr = reduce_period(f, z);
    out.steps = k;
    if (zr == 0.0 || in_petal(data, PetalKind::attracting, zr, data.s_att)) {
      out.verdict = BasinVerdict::in_B1;
      return out;
    }
    if (!std::isfinite(zr.real()) || !std::isfinite(zr.imag()) || std::abs(zr) > f.escape_radius()) {
      out.verdict = BasinVerdict::escaped;
      return out;
    }
    if (q > 1 && SectorSpec{PetalKind::attracting, data.s_att}.contains(coord_I(data, zr))) {
      for (int m = 1; m < q; ++m) {
        const cplx vm = data.v_att * std::polar(1.0, 2.0 * kPi * m / q);
        if (in_direction_sector(zr, vm, kPi / q)) {
          out.verdict = BasinVerdict::undecided;
          out.entered_other_petal = true;
          return out;
        }
      }
    }
    if (k >= budget) {
      out.verdict = BasinVerdict::undecided;
      return out;
    }
    z = f(z);
  }
}

}  // namespace germlab
