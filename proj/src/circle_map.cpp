#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "germlab/circle.hpp"
#include "germlab/sequence.hpp"

namespace germlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// FFTW planning is not thread safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> dft(std::vector<cplx> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(n);
  fftw_plan plan;
  {
    const std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()),
                            sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    const std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

// Least-squares slope of log m_k against k over the given indices.
double log_slope(const std::vector<std::pair<int, double>>& pts) {
  if (pts.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, m] : pts) {
    const double y = std::log(m);
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0 : (n * sxy - sx * sy) / den;
}

cplx lift_to_circle(double x) { return std::polar(1.0, kTwoPi * x); }

double circle_dist(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

std::int64_t denominator_of(const Rational& x) {
  return static_cast<std::int64_t>(boost::multiprecision::denominator(x));
}

RationalAngle angle_of(const Rational& x) {
  return RationalAngle(static_cast<std::int64_t>(boost::multiprecision::numerator(x)), denominator_of(x));
}

int default_fail_run(int q) { return std::max(4, q + 2); }

int tongue_denominator(double a, double b) {
  const auto rho = rotation_number(ArnoldSystem(a, b));
  return rho.rational ? static_cast<int>(rho.rational->q) : 0;
}

}  // namespace

CircleMap circle_identity() { return {[](cplx w) { return w; }, "identity"}; }

CircleMap rigid_rotation(double theta) {
  const cplx r = std::polar(1.0, kTwoPi * theta);
  return {[r](cplx w) { return r * w; }, "rotation"};
}

CircleMap arnold_iterate(const ArnoldSystem& sys, int k) {
  if (k >= 0) return {[sys, k](cplx w) { return sys.complexified_iterate(w, k); }, "arnold^" + std::to_string(k)};
  return {[sys, k](cplx w) {
            // Complex lift x with w = e^{2πix}, inverted step by step by Newton.
            cplx y = std::log(w) / cplx(0, kTwoPi);
            for (int i = 0; i < -k; ++i) {
              cplx x(sys.lift_inverse(y.real()), 0.0);
              x += cplx(0, y.imag()) / sys.lift_derivative(x);
              for (int it = 0; it < 60; ++it) {
                const cplx step = (sys.lift(x) - y) / sys.lift_derivative(x);
                x -= step;
                if (std::abs(step) < 1e-16) break;
              }
              y = x;
            }
            return std::exp(cplx(0, kTwoPi) * y);
          },
          "arnold^" + std::to_string(k)};
}

LaurentDescriptor LaurentDescriptor::from_samples(const std::function<cplx(double)>& on_circle, int samples) {
  if (samples < 16 || (samples & (samples - 1)) != 0)
    throw Error(ErrorCode::invalid_argument, "sample count must be a power of two >= 16");
  std::vector<cplx> vals(samples);
  for (int j = 0; j < samples; ++j) {
    vals[j] = on_circle(static_cast<double>(j) / samples);
    if (!std::isfinite(vals[j].real()) || !std::isfinite(vals[j].imag()))
      throw Error(ErrorCode::non_finite_coefficient, "circle map sample is not finite");
  }
  LaurentDescriptor d;
  d.samples_ = samples;
  d.coeffs_ = dft(std::move(vals), FFTW_FORWARD);
  for (auto& c : d.coeffs_) c /= static_cast<double>(samples);

  double peak = 0;
  for (const auto& c : d.coeffs_) peak = std::max(peak, std::abs(c));
  d.floor_ = 1e-14 * std::max(peak, 1e-300);
  const int half = samples / 2;

  // Decay on each side: last index above the noise floor, then a log-linear
  // fit over the upper half of the significant range.
  auto side = [&](int sign, int& last, double& radius, bool& decayed, double& edge) {
    last = 0;
    for (int k = 1; k < half; ++k)
      if (std::abs(d.coeff(sign * k)) > d.floor_) last = k;
    decayed = last < half - half / 8;
    edge = last > 0 ? std::abs(d.coeff(sign * last)) : 0.0;
    if (last < 4) {
      radius = kInf;
      return;
    }
    std::vector<std::pair<int, double>> pts;
    for (int k = last / 2; k <= last; ++k) {
      const double m = std::abs(d.coeff(sign * k));
      if (m > d.floor_) pts.emplace_back(k, m);
    }
    const double slope = log_slope(pts);
    radius = slope < 0 ? std::exp(-slope) : 1.0;
  };
  int last_pos = 0, last_neg = 0;
  double r_out = 0, r_in_inv = 0;
  side(+1, last_pos, r_out, d.decayed_pos_, d.edge_pos_);
  side(-1, last_neg, r_in_inv, d.decayed_neg_, d.edge_neg_);
  d.k_max_ = last_pos;
  d.k_min_ = -last_neg;
  d.r_out_ = r_out;
  d.r_in_ = r_in_inv == kInf ? 0.0 : 1.0 / r_in_inv;
  return d;
}

LaurentDescriptor LaurentDescriptor::from_map(const CircleMap& g, int samples) {
  return from_samples([&g](double x) { return g(lift_to_circle(x)); }, samples);
}

cplx LaurentDescriptor::coeff(int k) const {
  const int idx = ((k % samples_) + samples_) % samples_;
  return coeffs_[static_cast<std::size_t>(idx)];
}

double LaurentDescriptor::tail_bound(double rho) const {
  double tail = 0;
  if (edge_pos_ > 0 && r_out_ != kInf) {
    const double t = rho / r_out_;
    tail += t < 1 ? edge_pos_ * std::pow(rho, k_max_) * t / (1 - t) : kInf;
  }
  if (edge_neg_ > 0 && r_in_ > 0) {
    const double t = r_in_ / rho;
    tail += t < 1 ? edge_neg_ * std::pow(rho, k_min_) * t / (1 - t) : kInf;
  }
  // Aliasing and rounding of the retained coefficients.
  return tail + floor_ * (k_max_ - k_min_ + 1) * std::max(std::pow(rho, k_max_), std::pow(rho, k_min_));
}

cplx LaurentDescriptor::eval(cplx w) const {
  cplx s{};
  for (int k = k_min_; k <= k_max_; ++k) s += coeff(k) * std::pow(w, k);
  return s;
}

std::vector<cplx> LaurentDescriptor::eval_circle(double rho, int count) const {
  int n = std::max(count, 16);
  while (n < 2 * (k_max_ - k_min_ + 1)) n *= 2;
  std::vector<cplx> shifted(n, cplx{});
  for (int k = k_min_; k <= k_max_; ++k) shifted[static_cast<std::size_t>(((k % n) + n) % n)] += coeff(k) * std::pow(rho, k);
  auto vals = dft(std::move(shifted), FFTW_BACKWARD);
  if (n == count) return vals;
  std::vector<cplx> out(count);
  for (int j = 0; j < count; ++j) out[j] = vals[static_cast<std::size_t>(static_cast<long>(j) * n / count)];
  return out;
}

bool is_r_good_circle(const LaurentDescriptor& g, double r) {
  if (!(r > 1)) throw Error(ErrorCode::invalid_argument, "r must exceed 1");
  if (r >= g.r_out() || 1.0 / r <= g.r_in()) return false;
  if (!g.decayed())
    throw Error(ErrorCode::undecidable_at_this_order, "Laurent coefficients have not decayed at this sample count");
  // Open annulus: circles r^t for t in (-1, 1), including ones next to the boundary.
  static const double ts[] = {-1 + 1e-9, -0.875, -0.75, -0.625, -0.5, -0.375, -0.25, -0.125, 0,
                              0.125,     0.25,   0.375, 0.5,    0.625, 0.75,   0.875, 1 - 1e-9};
  for (const double t : ts) {
    const double rho = std::pow(r, t);
    const double tail = g.tail_bound(rho);
    for (const cplx v : g.eval_circle(rho, 512)) {
      const double m = std::abs(v);
      if (!(m - tail > 0.5 && m + tail < 2.0)) return false;
    }
  }
  return true;
}

bool is_r_good_circle(const CircleMap& g, double r, int samples) {
  return is_r_good_circle(LaurentDescriptor::from_map(g, samples), r);
}

KPrimeResult K_prime_set(double a, double b, double r, const KPrimeOptions& opts) {
  return K_prime_set(a, b, r, tongue_denominator(a, b), opts);
}

KPrimeResult K_prime_set(double a, double b, double r, int q, const KPrimeOptions& opts) {
  const ArnoldSystem sys(a, b);
  const int fail_run = opts.fail_run > 0 ? opts.fail_run : default_fail_run(q);
  KPrimeResult res;
  auto good = [&](int k) {
    const auto desc = LaurentDescriptor::from_samples(
        [&](double x) { return lift_to_circle(sys.lift_iterate(x, k)); }, opts.samples);
    try {
      return is_r_good_circle(desc, r);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::undecidable_at_this_order) throw;
      ++res.undecided;
      return false;
    }
  };
  if (good(0)) res.members.push_back(0);
  auto scan = [&](int direction) {
    int run = 0;
    int k = 0;
    while (true) {
      k += direction;
      if (std::abs(k) > opts.max_half_width) {
        res.capped = true;
        return k - direction;
      }
      if (good(k)) {
        res.members.push_back(k);
        run = 0;
      } else {
        ++run;
      }
      if (run >= fail_run && std::abs(k) >= opts.initial_half_width) return k;
    }
  };
  res.k_max = scan(+1);
  res.k_min = scan(-1);
  std::sort(res.members.begin(), res.members.end());
  return res;
}

std::string PrimeEstimate::note() const {
  std::ostringstream s;
  s << "heuristic scan over " << scanned << " parameters";
  if (widened) s << ", no violator found (value is the scan radius)";
  return s.str();
}

PrimeEstimate delta_prime_estimate(double a, double b, double r, int denom_cap, double window) {
  const auto base = K_prime_set(a, b, r).members;
  struct Candidate {
    double a;
    int q;
  };
  std::vector<Candidate> cands;
  for (int q = 1; q <= denom_cap; ++q) {
    const auto p_lo = static_cast<std::int64_t>(std::floor((a - window - b) * q)) - 1;
    const auto p_hi = static_cast<std::int64_t>(std::ceil((a + window + b) * q)) + 1;
    for (auto p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(p, static_cast<std::int64_t>(q)) != 1) continue;
      for (const auto side : {TongueSide::left, TongueSide::right}) {
        const double ap = parabolic_parameter(RationalAngle(p, q), b, side).a;
        const double dist = std::abs(ap - a);
        if (dist > 1e-12 && dist <= window) cands.push_back({ap, q});
      }
    }
  }
  std::sort(cands.begin(), cands.end(),
            [a](const Candidate& x, const Candidate& y) { return std::abs(x.a - a) < std::abs(y.a - a); });
  PrimeEstimate est;
  for (const auto& c : cands) {
    ++est.scanned;
    const auto ks = K_prime_set(c.a, b, r, c.q).members;
    if (!std::includes(base.begin(), base.end(), ks.begin(), ks.end())) {
      est.value = std::abs(c.a - a);
      est.violator = c.a;
      return est;
    }
  }
  est.value = window;
  est.widened = true;
  return est;
}

PrimeEstimate kappa_prime_estimate(double a, double b, double r, double eps, double window, int levels) {
  const auto rho_a = rotation_number(ArnoldSystem(a, b)).value;
  const auto base = K_prime_set(a, b, r).members;
  PrimeEstimate est;
  double clean = 0;
  for (int i = levels - 1; i >= 0; --i) {
    const double d = window * std::ldexp(1.0, -i);
    for (const double ap : {a - d, a + d}) {
      ++est.scanned;
      const auto rho = rotation_number(ArnoldSystem(ap, b));
      const int q = rho.rational ? static_cast<int>(rho.rational->q) : 0;
      for (const int k : K_prime_set(ap, b, r, q).members) {
        bool near = false;
        for (const int kk : base) near = near || circle_dist(k * rho.value - kk * rho_a) < eps;
        if (!near) {
          est.value = clean > 0 ? clean : 0.5 * d;
          est.violator = ap;
          return est;
        }
      }
    }
    clean = d;
  }
  est.value = window;
  est.widened = true;
  return est;
}

CircleSequence a_sequence_builder(double b, int stages, const CircleSequenceOptions& opts) {
  if (stages < 1) throw Error(ErrorCode::invalid_argument, "stages must be positive");
  (void)ArnoldSystem(0.0, b);
  CircleSequence out;
  out.b = b;
  auto r_of = [](int j) { return 1.0 + 1.0 / j; };

  struct Accepted {
    Rational rho;
    std::int64_t q;
    double a;
    double delta;
    double kappa;
  };
  std::vector<Accepted> acc;

  auto estimate = [&](CircleSequenceStage& st, int n) {
    st.delta_est = delta_prime_estimate(st.a, b, r_of(n), opts.denom_cap, opts.window).value;
    double kappa = kInf;
    for (int l = 1; l <= n; ++l)
      kappa = std::min(kappa, kappa_prime_estimate(st.a, b, r_of(l), 1.0 / n, opts.window, opts.kappa_levels).value);
    st.kappa_est = kappa;
  };

  {
    CircleSequenceStage st;
    st.pq = RationalAngle(0, 1);
    st.a = parabolic_parameter(st.pq, b, TongueSide::right).a;
    const auto rho = rotation_number(ArnoldSystem(st.a, b));
    st.rho_certified = rho.rational && *rho.rational == st.pq;
    estimate(st, 1);
    acc.push_back({Rational(0), 1, st.a, st.delta_est, st.kappa_est});
    out.stages.push_back(st);
  }

  std::ostringstream diag;
  for (int n = 2; n <= stages; ++n) {
    const auto& prev = acc.back();
    double a_hi = kInf;
    Rational rho_hi = prev.rho + 1;
    for (const auto& s : acc) {
      a_hi = std::min({a_hi, s.a + s.delta, s.a + s.kappa});
      rho_hi = std::min<Rational>(rho_hi, s.rho + Rational(1) / (s.q * s.q));
    }
    // Rotation numbers reachable below a_hi: certified lower end of ρ(a_hi).
    const auto rho_top = rotation_number(ArnoldSystem(a_hi, b));
    const Rational reach = to_rational(rho_top.lower);
    Rational hi = std::min<Rational>(rho_hi, reach);
    std::optional<CircleSequenceStage> found;
    for (int attempt = 0; attempt < 24 && prev.rho < hi; ++attempt) {
      const Rational cand = simplest_between(prev.rho, hi);
      CircleSequenceStage st;
      st.pq = angle_of(cand);
      const auto pp = parabolic_parameter(st.pq, b, TongueSide::right);
      st.a = pp.a;
      const Rational an = to_rational(st.a);
      st.increasing = an > to_rational(prev.a);
      st.k_inclusion = true;
      for (std::size_t j = 0; j < acc.size(); ++j) {
        const int jj = static_cast<int>(j) + 1;
        const Rational dist = boost::multiprecision::abs(an - to_rational(acc[j].a));
        st.delta_ok = st.delta_ok && dist < to_rational(acc[j].delta);
        st.kappa_ok = st.kappa_ok && dist < to_rational(acc[j].kappa);
        st.rho_ok = st.rho_ok && boost::multiprecision::abs(cand - acc[j].rho) < Rational(1) / (acc[j].q * acc[j].q);
        const auto kx = K_prime_set(st.a, b, r_of(jj), static_cast<int>(st.pq.q)).members;
        const auto ky = K_prime_set(acc[j].a, b, r_of(jj), static_cast<int>(acc[j].q)).members;
        st.k_inclusion = st.k_inclusion && std::includes(ky.begin(), ky.end(), kx.begin(), kx.end());
      }
      const auto rho = rotation_number(ArnoldSystem(st.a, b));
      st.rho_certified = rho.rational && *rho.rational == st.pq;
      if (st.all_ok()) {
        found = st;
        break;
      }
      hi = cand;
    }
    if (!found) {
      diag << "no admissible rational at stage " << n;
      break;
    }
    estimate(*found, n);
    acc.push_back({to_rational(RationalAngle(found->pq)), found->pq.q, found->a, found->delta_est, found->kappa_est});
    out.stages.push_back(*found);
  }

  out.complete = static_cast<int>(out.stages.size()) == stages;
  for (const auto& st : out.stages) out.complete = out.complete && st.all_ok();
  out.a_hat = decimal_string(to_rational(acc.back().a), opts.digits);
  // The limit's rotation number lies in [ρ_n, min_j ρ_j + 1/q_j²).
  Rational lo = acc.back().rho;
  Rational hi = lo + 1;
  for (const auto& s : acc) hi = std::min<Rational>(hi, s.rho + Rational(1) / (s.q * s.q));
  out.rho_interval_lo = decimal_string(lo, opts.digits);
  out.rho_interval_hi = decimal_string(hi, opts.digits);
  out.min_denominator_inside = denominator_of(simplest_between(lo, hi));
  out.diagnostics = diag.str();
  out.provenance = "heuristic construction: delta'/kappa' are scan estimates over tongue boundaries with "
                   "denominators <= " +
                   std::to_string(opts.denom_cap) + " and a dyadic ladder of " +
                   std::to_string(opts.kappa_levels) + " levels";
  return out;
}

}  // namespace germlab
