#include "germlab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

namespace germlab {

namespace mp = boost::multiprecision;

Rational to_rational(const RationalAngle& pq) { return Rational(pq.p, pq.q); }

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "non-finite value");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant·2^53 is an exact integer.
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(m);
  const int shift = exp - 53;
  if (shift >= 0) return r * Rational(mp::cpp_int(1) << shift);
  return r / Rational(mp::cpp_int(1) << (-shift));
}

namespace {

mp::cpp_int floor_of(const Rational& x) {
  mp::cpp_int n = mp::numerator(x), d = mp::denominator(x);
  mp::cpp_int q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

RationalAngle to_angle(const Rational& x) {
  const mp::cpp_int n = mp::numerator(x), d = mp::denominator(x);
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (mp::abs(n) > kMax || d > kMax) throw Error(ErrorCode::out_of_range, "rational exceeds 64-bit range");
  return RationalAngle(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

double distance_mod1(double x) { return std::abs(x - std::round(x)); }

}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "empty interval");
  const mp::cpp_int fl = floor_of(lo);
  if (Rational(fl + 1) < hi) {
    // An integer lies strictly inside; pick the one closest to zero.
    if (lo < 0 && hi > 0) return Rational(0);
    if (hi <= 0) {
      mp::cpp_int c = -floor_of(-hi);  // ceil(hi)
      if (Rational(c) >= hi) c -= 1;
      return Rational(c);
    }
    return Rational(fl + 1);
  }
  const Rational base(fl);
  const Rational a = lo - base, b = hi - base;  // 0 <= a < b <= 1
  if (a == 0) {
    // Least m with 1/m < b.
    const mp::cpp_int m = floor_of(1 / b) + 1;
    return base + Rational(1) / Rational(m);
  }
  return base + 1 / simplest_between(1 / b, 1 / a);
}

std::string decimal_string(const Rational& x, int digits) {
  mp::cpp_int n = mp::numerator(x), d = mp::denominator(x);
  std::ostringstream out;
  if (n < 0) {
    out << '-';
    n = -n;
  }
  out << mp::cpp_int(n / d).str() << '.';
  mp::cpp_int rem = n % d;
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    out << mp::cpp_int(rem / d).str();
    rem %= d;
  }
  return out.str();
}

std::string EstimatorProvenance::note() const {
  std::ostringstream s;
  s << "heuristic at truncation N=" << order << ", denominators <= " << denom_cap << ", " << scanned
    << " candidates" << (widened ? ", no violator found (value is the scan radius)" : "")
    << (k_stable ? "" : ", K set not stable under N -> 2N");
  return s.str();
}

bool k_inclusion(const RationalAngle& x, const RationalAngle& y, double r, int order) {
  KSetOptions opts;
  opts.order = order;
  const auto kx = k_set_widened(x, r, opts).members;
  const auto ky = k_set_widened(y, r, opts).members;
  return std::includes(ky.begin(), ky.end(), kx.begin(), kx.end());
}

DeltaEstimate delta_estimate(const RationalAngle& pq, double r, int denom_cap, int order) {
  if (denom_cap < 1) throw Error(ErrorCode::invalid_argument, "denominator cap must be positive");
  KSetOptions opts;
  opts.order = order;
  DeltaEstimate est;
  est.base_k = k_set_widened(pq, r, opts).members;
  KSetOptions twice = opts;
  twice.order = 2 * order;
  est.provenance.order = order;
  est.provenance.denom_cap = denom_cap;
  est.provenance.k_stable = k_set_widened(pq, r, twice).members == est.base_k;

  const Rational centre = to_rational(pq);
  const Rational window = Rational(1, pq.q) / pq.q;
  std::vector<std::pair<Rational, RationalAngle>> candidates;
  auto consider = [&](std::int64_t p, std::int64_t q) {
    const RationalAngle c(p, q);
    if (c == pq) return;
    const Rational d = mp::abs(to_rational(c) - centre);
    if (d < window) candidates.emplace_back(d, c);
  };
  for (std::int64_t q = 1; q <= denom_cap; ++q) {
    const Rational lo = (centre - window) * q;
    for (mp::cpp_int p = floor_of(lo); Rational(p, q) < centre + window; ++p) {
      if (std::gcd(static_cast<std::int64_t>(p), q) == 1) consider(static_cast<std::int64_t>(p), q);
    }
  }
  // Farey neighbours with larger denominators are the closest rationals.
  if (pq.q > 1) {
    for (std::int64_t q = denom_cap + 1; q <= denom_cap * pq.q; ++q) {
      for (const int s : {-1, 1}) {
        const std::int64_t num = pq.p * q + s;
        if (num % pq.q == 0) consider(num / pq.q, q);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.q < b.second.q || (a.second.q == b.second.q && a.second.p < b.second.p);
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const auto& a, const auto& b) { return a.second == b.second; }),
                   candidates.end());

  for (const auto& [dist, cand] : candidates) {
    ++est.provenance.scanned;
    const auto kc = k_set_widened(cand, r, opts).members;
    if (!std::includes(est.base_k.begin(), est.base_k.end(), kc.begin(), kc.end())) {
      est.delta = static_cast<double>(dist);
      est.violator = cand;
      return est;
    }
  }
  est.delta = static_cast<double>(window);
  est.provenance.widened = true;
  return est;
}

KappaEstimate kappa_estimate(const RationalAngle& pq, double r, double eps, int denom_cap, int order) {
  if (!(eps > 0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  KSetOptions kopts;
  kopts.order = std::max(order, 16);
  const auto ks = k_set_widened(pq, r, kopts).members;
  const int grid = std::max(64, static_cast<int>(std::ceil(8.0 / eps)));
  const double centre = pq.value();
  const double top = 1.0 / (static_cast<double>(pq.q) * static_cast<double>(pq.q));
  const double floor_d = 1.0 / (static_cast<double>(denom_cap) * denom_cap);

  std::vector<double> ladder;
  for (double d = top; d >= floor_d; d *= 0.5) ladder.push_back(d);
  std::reverse(ladder.begin(), ladder.end());

  KappaEstimate est;
  est.provenance.order = order;
  est.provenance.denom_cap = denom_cap;
  auto violates = [&](double alpha) {
    const Germ qa = quadratic_germ(alpha, order);
    for (int m = 0; m < grid; ++m) {
      const double beta = static_cast<double>(m) / grid;
      const auto fc = formal_commutant(qa, std::polar(1.0, 2.0 * std::numbers::pi * beta), order);
      ++est.provenance.scanned;
      if (!fc.resonant.empty() || !is_r_good(fc.germ, r)) continue;
      ++est.feasible;
      const bool near = std::any_of(ks.begin(), ks.end(),
                                    [&](int k) { return distance_mod1(beta - k * centre) < eps; });
      if (!near) return true;
    }
    return false;
  };

  double good = 0;
  for (const double d : ladder) {
    if (violates(centre + d) || violates(centre - d)) break;
    good = d;
  }
  if (good == 0) {
    est.kappa = 0.5 * ladder.front();
    est.provenance.widened = true;
  } else {
    est.kappa = good;
    est.provenance.widened = good == ladder.back();
  }
  return est;
}

AlphaSequence build_alpha_sequence(int stages, const AlphaSequenceOptions& opts) {
  if (stages < 1) throw Error(ErrorCode::invalid_argument, "stages must be >= 1");
  AlphaSequence out;
  {
    std::ostringstream s;
    s << "heuristic construction: empirical delta/kappa at truncation N=" << opts.order << " (kappa N="
      << opts.kappa_order << "), denominators <= " << opts.denom_cap;
    out.provenance = s.str();
  }

  // radius[j] = min(δ_j, min_l κ_{j,l}, 1/q_j²), compared exactly.
  std::vector<Rational> values, radii, deltas, kappas;
  std::vector<std::vector<Rational>> kappa_rows;
  RationalAngle current = opts.start;

  for (int n = 1; n <= stages; ++n) {
    SequenceStage st;
    if (n > 1) {
      const Rational lo = values.back();
      Rational hi = values[0] + radii[0];
      for (std::size_t j = 1; j < values.size(); ++j) hi = std::min<Rational>(hi, values[j] + radii[j]);
      if (!(lo < hi)) {
        out.diagnostics = "empty admissible interval at stage " + std::to_string(n);
        break;
      }
      bool found = false;
      for (int attempt = 0; attempt < 24 && lo < hi; ++attempt) {
        const Rational x = simplest_between(lo, hi);
        RationalAngle cand;
        try {
          cand = to_angle(x);
        } catch (const Error& e) {
          out.diagnostics = e.what();
          break;
        }
        bool incl = true;
        for (std::size_t j = 0; j < values.size() && incl; ++j) {
          const RationalAngle pj = out.stages[j].pq;
          incl = k_inclusion(cand, pj, 1.0 / static_cast<double>(j + 1), opts.order);
        }
        if (incl) {
          current = cand;
          found = true;
          break;
        }
        hi = x;  // shrink past the offending candidate
      }
      if (!found) {
        if (out.diagnostics.empty()) out.diagnostics = "no admissible rational at stage " + std::to_string(n);
        break;
      }
      // Exact verification against every earlier stage.
      const Rational x = to_rational(current);
      for (std::size_t j = 0; j < values.size(); ++j) {
        const Rational d = mp::abs(x - values[j]);
        const Rational qj(out.stages[j].pq.q);
        st.delta_ok = st.delta_ok && d < deltas[j];
        for (const auto& kap : kappa_rows[j]) st.kappa_ok = st.kappa_ok && d < kap;
        st.rho_ok = st.rho_ok && d < 1 / (qj * qj);
        st.k_inclusion = st.k_inclusion && k_inclusion(current, out.stages[j].pq, 1.0 / (j + 1), opts.order);
      }
      st.increasing = x > values.back();
    }
    st.pq = current;
    const double r = 1.0 / n;
    const auto de = delta_estimate(current, r, opts.denom_cap, opts.order);
    st.delta_est = de.delta;
    std::vector<Rational> row;
    double kmin = 1e300;
    for (int l = 1; l <= n; ++l) {
      const auto ke = kappa_estimate(current, 1.0 / l, 1.0 / n, 4096, opts.kappa_order);
      row.push_back(to_rational(ke.kappa));
      kmin = std::min(kmin, ke.kappa);
    }
    st.kappa_est = kmin;
    out.stages.push_back(st);

    const Rational x = to_rational(current);
    const Rational qn(current.q);
    values.push_back(x);
    deltas.push_back(to_rational(de.delta));
    kappa_rows.push_back(row);
    Rational rad = std::min<Rational>(deltas.back(), 1 / (qn * qn));
    for (const auto& k : row) rad = std::min(rad, k);
    radii.push_back(rad);
  }

  out.complete = static_cast<int>(out.stages.size()) == stages;
  if (!out.stages.empty()) {
    const auto& last = out.stages.back().pq;
    out.alpha_hat = decimal_string(to_rational(last), opts.digits);
    const Rational err = Rational(1) / (Rational(last.q) * last.q);
    std::ostringstream s;
    s << std::scientific << std::setprecision(6) << static_cast<double>(err);
    out.error_bound = s.str();
  }
  return out;
}

RigidityReport multiplier_rigidity(double alpha, const Germ& g, int order, double tol) {
  const int n = std::min(order, g.order());
  if (std::abs(g.coeff(1) - 1.0) > tol)
    throw Error(ErrorCode::invalid_argument, "rigidity check expects g'(0) = 1");
  const Germ qa = quadratic_germ(alpha, n);
  const Germ gn = g.truncated(n);
  RigidityReport rep;
  rep.commutator = commutator_norm(qa, gn);
  const auto forced = formal_commutant(qa, 1.0, n);
  rep.resonant = forced.resonant;
  rep.distance_to_identity = germ_distance(gn, Germ::identity(n));
  const bool forced_identity = germ_distance(forced.germ, Germ::identity(n)) <= tol;
  rep.rigid = forced.resonant.empty() && forced_identity && rep.commutator <= tol && rep.distance_to_identity <= tol;
  return rep;
}

bool multiplier_rigidity_check(double alpha, const Germ& g, int order) {
  return multiplier_rigidity(alpha, g, order).rigid;
}

}  // namespace germlab
