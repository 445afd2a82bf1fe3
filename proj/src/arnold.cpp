#include "germlab/arnold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace germlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// S^{∘q}(x) - x with its derivatives in x and a, by forward recursion.
struct OrbitJet {
  double displacement = 0;  // S^q(x) - x
  double d = 1;             // (S^q)'(x)
  double dd = 0;            // (S^q)''(x)
  double alpha = 0;         // ∂S^q/∂a
  double beta = 0;          // ∂(S^q)'/∂a
};

OrbitJet orbit_jet(const ArnoldSystem& sys, double x, int q) {
  OrbitJet j;
  double y = x - std::floor(x);
  double shift = std::floor(x);
  const double start = x;
  for (int i = 0; i < q; ++i) {
    const double s1 = sys.lift_derivative(y);
    const double s2 = sys.lift_second_derivative(y);
    j.dd = s2 * j.d * j.d + s1 * j.dd;
    j.beta = s2 * j.alpha * j.d + s1 * j.beta;
    j.alpha = s1 * j.alpha + 1.0;
    j.d = s1 * j.d;
    const double t = sys.lift(y);
    const double fl = std::floor(t);
    y = t - fl;
    shift += fl;
  }
  j.displacement = (shift - std::floor(start)) + (y - (start - std::floor(start)));
  return j;
}

double displacement(const ArnoldSystem& sys, double x, int q) {
  double y = x - std::floor(x);
  const double y0 = y;
  double shift = 0;
  for (int i = 0; i < q; ++i) {
    const double t = sys.lift(y);
    const double fl = std::floor(t);
    y = t - fl;
    shift += fl;
  }
  return shift + (y - y0);
}

struct Extremum {
  double x = 0;
  double value = 0;
};

// Global min (or max) of S^q(x) - x over one period: grid, then golden
// section around the best grid points.
Extremum extremum(const ArnoldSystem& sys, int q, bool minimum) {
  const int n = std::max(256, 32 * q);
  const double sign = minimum ? 1.0 : -1.0;
  std::vector<std::pair<double, int>> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = {sign * displacement(sys, static_cast<double>(i) / n, q), i};
  const int keep = std::min(n, 3);
  std::partial_sort(vals.begin(), vals.begin() + keep, vals.end());
  Extremum best{0, 1e300};
  const double h = 1.0 / n;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < keep; ++k) {
    double lo = (vals[k].second - 1) * h;
    double hi = (vals[k].second + 1) * h;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = sign * displacement(sys, x1, q);
    double f2 = sign * displacement(sys, x2, q);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = sign * displacement(sys, x1, q);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = sign * displacement(sys, x2, q);
      }
    }
    const double x = 0.5 * (lo + hi);
    const double v = std::min({sign * displacement(sys, x, q), vals[k].first, f1, f2});
    if (v < best.value) best = {x - std::floor(x), v};
  }
  best.value *= sign;
  return best;
}

double frac(double x) { return x - std::floor(x); }

double circle_distance(double x, double y) {
  const double d = frac(x - y);
  return std::min(d, 1.0 - d);
}

}  // namespace

ArnoldSystem::ArnoldSystem(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a)) throw Error(ErrorCode::out_of_range, "a must be finite");
  if (!(b > 0 && b < kMaxArnoldB)) throw Error(ErrorCode::out_of_range, "b must lie in (0, 1/(2π))");
}

double ArnoldSystem::lift(double x) const { return x + a_ + b_ * std::sin(kTwoPi * x); }
double ArnoldSystem::lift_derivative(double x) const { return 1.0 + kTwoPi * b_ * std::cos(kTwoPi * x); }
double ArnoldSystem::lift_second_derivative(double x) const {
  return -kTwoPi * kTwoPi * b_ * std::sin(kTwoPi * x);
}
cplx ArnoldSystem::lift(cplx x) const { return x + a_ + b_ * std::sin(kTwoPi * x); }
cplx ArnoldSystem::lift_derivative(cplx x) const { return 1.0 + kTwoPi * b_ * std::cos(kTwoPi * x); }

double ArnoldSystem::lift_inverse(double y) const {
  // S is increasing with S(x) - x - a in [-b, b].
  double lo = y - a_ - b_;
  double hi = y - a_ + b_;
  double x = y - a_;
  for (int it = 0; it < 100; ++it) {
    const double fx = lift(x) - y;
    if (fx > 0) hi = x; else lo = x;
    double next = x - fx / lift_derivative(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

double ArnoldSystem::lift_iterate(double x, int n) const {
  for (int i = 0; i < n; ++i) x = lift(x);
  for (int i = 0; i < -n; ++i) x = lift_inverse(x);
  return x;
}

cplx ArnoldSystem::complexified(cplx w) const {
  return std::polar(1.0, kTwoPi * a_) * w * std::exp(kPi * b_ * (w - 1.0 / w));
}

cplx ArnoldSystem::complexified_derivative(cplx w) const {
  return std::polar(1.0, kTwoPi * a_) * std::exp(kPi * b_ * (w - 1.0 / w)) * (1.0 + kPi * b_ * (w + 1.0 / w));
}

cplx ArnoldSystem::complexified_iterate(cplx w, int k) const {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "complexified_iterate needs k >= 0");
  for (int i = 0; i < k; ++i) w = complexified(w);
  return w;
}

cplx tau(cplx w) { return 1.0 / std::conj(w); }

RotationNumberResult rotation_number(const ArnoldSystem& sys, const RotationNumberOptions& opts) {
  if (opts.iterations < 1) throw Error(ErrorCode::invalid_argument, "iterations must be positive");
  constexpr double eta = 1e-9;  // guard for float error in S^n(x) - x near integers
  RotationNumberResult res;
  double lo = -1e300;
  double hi = 1e300;
  double y = frac(opts.x0);
  const double y0 = y;
  double shift = 0;
  double d = 0;
  for (int n = 1; n <= opts.iterations; ++n) {
    const double t = sys.lift(y);
    const double fl = std::floor(t);
    y = t - fl;
    shift += fl;
    if ((n & (n - 1)) == 0 || n == opts.iterations) {
      d = shift + (y - y0);
      lo = std::max(lo, std::floor(d - eta) / n);
      hi = std::min(hi, (std::floor(d + eta) + 1.0) / n);
    }
  }
  res.iterations = opts.iterations;
  res.lower = lo;
  res.upper = hi;

  for (int q = 1; q <= opts.max_period; ++q) {
    const auto p_lo = static_cast<std::int64_t>(std::ceil(q * lo - 1e-12));
    const auto p_hi = static_cast<std::int64_t>(std::floor(q * hi + 1e-12));
    for (auto p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(p, static_cast<std::int64_t>(q)) != 1) continue;
      const double tol = 1e-13 * q;
      const auto mn = extremum(sys, q, true);
      if (mn.value > static_cast<double>(p) + tol) continue;
      const auto mx = extremum(sys, q, false);
      if (mx.value < static_cast<double>(p) - tol) continue;
      const double v = static_cast<double>(p) / q;
      res.value = frac(v);
      res.error_bound = 0;
      res.lower = res.upper = v;
      res.method = "periodic-orbit";
      res.rational = RationalAngle(p, q);
      return res;
    }
  }
  const double est = std::clamp(d / opts.iterations, lo, hi);
  res.value = frac(est);
  res.error_bound = std::max(est - lo, hi - est);
  res.method = "bracket";
  return res;
}

CriticalPoints critical_points(const ArnoldSystem& sys) {
  const double k = 1.0 / (kPi * sys.b());
  CriticalPoints c;
  // Larger-magnitude root first, the other from Vieta to avoid cancellation.
  c.c2 = (-k - std::sqrt(k * k - 4.0)) / 2.0;
  c.c1 = 1.0 / c.c2;
  return c;
}

cplx ParabolicCycle::point(int i) const {
  return std::polar(1.0, kTwoPi * angles.at(static_cast<std::size_t>(i)));
}

std::string_view to_string(TongueSide side) { return side == TongueSide::left ? "left" : "right"; }

TongueSide tongue_side_from_string(std::string_view name) {
  if (name == "left") return TongueSide::left;
  if (name == "right") return TongueSide::right;
  throw Error(ErrorCode::invalid_argument, "side must be left or right");
}

ParabolicParameter parabolic_parameter(const RationalAngle& pq, double b, TongueSide side) {
  (void)ArnoldSystem(0.0, b);
  const int q = static_cast<int>(pq.q);
  if (pq.q > 100000) throw Error(ErrorCode::out_of_range, "denominator too large");
  const double p = static_cast<double>(pq.p);
  const bool right = side == TongueSide::right;

  // Right boundary: min_x (S^q - x) - p crosses 0 upward in a; left: max_x.
  auto gap = [&](double a) { return extremum(ArnoldSystem(a, b), q, right).value - p; };
  double lo = p / q - b;
  double hi = p / q + b;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap(mid) < 0) lo = mid; else hi = mid;
  }
  ParabolicParameter out;
  double a = right ? hi : lo;
  out.tolerance = std::max(hi - lo, 1e-15);
  double x = extremum(ArnoldSystem(a, b), q, right).x;

  // Newton on (S^q(x) - x - p, (S^q)'(x) - 1).
  double xn = x;
  double an = a;
  bool ok = false;
  for (int it = 0; it < 60; ++it) {
    const auto j = orbit_jet(ArnoldSystem(an, b), xn, q);
    const double e1 = j.displacement - p;
    const double e2 = j.d - 1.0;
    const double m11 = j.d - 1.0, m12 = j.alpha, m21 = j.dd, m22 = j.beta;
    const double det = m11 * m22 - m12 * m21;
    if (!(std::abs(det) > 0)) break;
    const double dx = (e1 * m22 - e2 * m12) / det;
    const double da = (m11 * e2 - m21 * e1) / det;
    xn -= dx;
    an -= da;
    if (!std::isfinite(xn) || !std::isfinite(an)) break;
    if (std::abs(dx) < 1e-13 && std::abs(da) < 1e-15) {
      ok = true;
      break;
    }
  }
  if (ok) {
    const auto j = orbit_jet(ArnoldSystem(an, b), xn, q);
    ok = std::abs(j.displacement - p) < 1e-11 && std::abs(j.d - 1.0) < 1e-9 && std::abs(an - a) < 1e-6;
  }
  if (ok) {
    a = an;
    x = xn;
    out.tolerance = 0;
  }
  out.newton_converged = ok;
  out.a = a;

  const ArnoldSystem sys(a, b);
  auto& cyc = out.cycle;
  cyc.period = q;
  cyc.rotation = pq;
  cyc.lift_shift = static_cast<int>(pq.p);
  double y = frac(x);
  double mult = 1.0;
  for (int i = 0; i < q; ++i) {
    cyc.angles.push_back(y);
    mult *= sys.lift_derivative(y);
    y = frac(sys.lift(y));
  }
  cyc.multiplier = mult;
  return out;
}

AnalyticMap circle_return_map(const ArnoldSystem& sys, const ParabolicCycle& cycle, int jet_order) {
  if (jet_order < 2) throw Error(ErrorCode::invalid_order, "jet order must be at least 2");
  const double x1 = cycle.angles.at(0);
  const int n = cycle.period;
  const double shift = cycle.lift_shift;
  const double a = sys.a();
  const double b = sys.b();

  // S^n(x_1 + u) as a real power series in u.
  const int N = jet_order;
  std::vector<double> X(N + 1, 0.0);
  X[0] = x1;
  X[1] = 1.0;
  for (int step = 0; step < n; ++step) {
    // e^{2πi s} for the non-constant part s; real coefficients give cos and sin.
    std::vector<cplx> E(N + 1, cplx{});
    E[0] = 1.0;
    for (int m = 1; m <= N; ++m) {
      cplx acc{};
      for (int k = 1; k <= m; ++k) acc += static_cast<double>(k) * X[k] * E[m - k];
      E[m] = cplx(0, kTwoPi) * acc / static_cast<double>(m);
    }
    const double s0 = std::sin(kTwoPi * X[0]);
    const double c0 = std::cos(kTwoPi * X[0]);
    std::vector<double> next(N + 1);
    for (int m = 0; m <= N; ++m) next[m] = X[m] + b * (s0 * E[m].real() + c0 * E[m].imag());
    next[0] += a;
    X = std::move(next);
  }
  std::vector<cplx> coeffs(N);
  double scale = 1.0;  // z = 2πu
  for (int k = 1; k <= N; ++k) {
    scale /= kTwoPi;
    coeffs[k - 1] = kTwoPi * X[k] * scale;
  }

  // Near 0 the direct formula loses relative accuracy to cancellation in
  // S^n(x_1 + u) - x_1 - p; the Taylor jet does not.
  const Germ jet(coeffs);
  // Use the jet well inside its apparent radius of convergence.
  double radius = 0.05;
  for (int k = N / 2; k <= N; ++k) {
    const double c = std::abs(jet.coeff(k));
    if (c > 0) radius = std::min(radius, 0.25 * std::pow(c, -1.0 / k));
  }
  auto eval = [sys, x1, n, shift, jet, radius](cplx z) {
    if (std::abs(z) <= radius) {
      cplx v{}, dv{};
      for (int k = jet.order(); k >= 1; --k) {
        dv = dv * z + static_cast<double>(k) * jet.coeff(k);
        v = (v + jet.coeff(k)) * z;
      }
      return MapJet{v, dv};
    }
    cplx x = x1 + z / kTwoPi;
    cplx d = 1.0;
    for (int i = 0; i < n; ++i) {
      d *= sys.lift_derivative(x);
      x = sys.lift(x);
    }
    return MapJet{kTwoPi * (x - x1 - shift), d};
  };
  return AnalyticMap(eval, jet, 12.0, kTwoPi);
}

ParabolicCycle relabel_for_critical_point(const ArnoldSystem& sys, const ParabolicCycle& cycle, int budget) {
  const auto cp = critical_points(sys);
  cplx x(0.5, -std::log(std::abs(cp.c1)) / kTwoPi);
  const int n = cycle.period;
  for (int it = 0; it < budget; ++it) {
    for (int i = 0; i < n; ++i) {
      const double dre = circle_distance(x.real(), cycle.angles[i]);
      if (std::hypot(dre, x.imag()) < 1e-3) {
        ParabolicCycle out = cycle;
        std::rotate(out.angles.begin(), out.angles.begin() + i, out.angles.end());
        return out;
      }
    }
    for (int k = 0; k < n; ++k) x = sys.lift(x);
    x -= std::floor(x.real());
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()) || std::abs(x.imag()) > 10.0)
      throw Error(ErrorCode::critical_point_not_found, "critical orbit left the cylinder");
  }
  throw Error(ErrorCode::critical_point_not_found, "critical orbit did not reach the cycle within budget");
}

bool circle_orbit_converges(const ArnoldSystem& sys, const ParabolicCycle& cycle, double x, int budget,
                            double tol) {
  double y = frac(x);
  for (int it = 0; it <= budget; ++it) {
    for (const double c : cycle.angles)
      if (circle_distance(y, c) < tol) return true;
    y = frac(sys.lift(y));
  }
  return false;
}

}  // namespace germlab
