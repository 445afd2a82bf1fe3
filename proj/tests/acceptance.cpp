// Acceptance checks: one PASS/FAIL line per criterion, each with a pinned
// tolerance and wall-clock budget. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "germlab/centralizer.hpp"
#include "germlab/circle.hpp"
#include "germlab/sequence.hpp"

using namespace germlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const Error& e) {
    out = {false, std::string(to_string(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    out = {false, e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    out.pass = false;
    out.detail += " (over budget)";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %-28s %8.2fs / %.0fs  %s\n", out.pass ? "PASS" : "FAIL", id, name, secs, budget_s,
              out.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome series_oracle() {
  constexpr double kTol = 1e-12;
  const auto g = iterate(quadratic_germ(RationalAngle(1, 2), 4), 2);
  const std::vector<cplx> want{1, 0, -2, 1};
  double err = 0;
  for (int k = 1; k <= 4; ++k) err = std::max(err, std::abs(g.coeff(k) - want[k - 1]));
  return {err <= kTol, fmt("max coefficient error %.1e", err)};
}

Outcome parabolic_normalization() {
  constexpr double kMinNext = 1e-8;
  bool ok = true;
  std::ostringstream ss;
  for (const auto& pq : {RationalAngle(0, 1), RationalAngle(1, 2), RationalAngle(1, 3), RationalAngle(2, 5)}) {
    const auto F = iterate(quadratic_germ(pq, static_cast<int>(pq.q) + 8), static_cast<int>(pq.q));
    const auto po = parabolic_order(F);
    const auto d = normalize(AnalyticMap::quadratic_return_map(pq));
    ok = ok && po.q == pq.q && std::abs(po.a_next) > kMinNext && d.q == pq.q;
    ss << pq.str() << ":q=" << po.q << ",|a|=" << std::abs(po.a_next) << " ";
  }
  return {ok, ss.str()};
}

Outcome abel_residual(const RationalAngle& pq) {
  constexpr double kCertTol = 1e-8;
  constexpr double kFreshTol = 1e-7;
  constexpr int kFresh = 256;
  const auto f = AnalyticMap::quadratic_return_map(pq);
  const auto d = normalize(f);
  double cert = 0, fresh = 0;
  std::mt19937_64 rng(20260101);
  for (const auto kind : {PetalKind::attracting, PetalKind::repelling}) {
    const auto fc = build_fatou(f, d, kind);
    const double s = d.s(kind);
    const double s_cert = kind == PetalKind::attracting ? s : s + 2.0;
    for (const cplx z : sector_grid(kind, s_cert, 32, 4 * s + 8)) cert = std::max(cert, fc.abel_residual(z));
    const double sign = kind == PetalKind::attracting ? 1.0 : -1.0;
    std::uniform_real_distribution<double> re(s_cert, s_cert + 6 * s + 12), im(-6 * s - 12, 6 * s + 12);
    const SectorSpec sector{kind, s_cert};
    for (int used = 0; used < kFresh;) {
      const cplx z(sign * re(rng), im(rng));
      if (!sector.contains(z)) continue;
      fresh = std::max(fresh, fc.abel_residual(z));
      ++used;
    }
  }
  return {cert <= kCertTol && fresh <= kFreshTol, fmt("certification %.1e", cert) + fmt(", fresh %.1e", fresh)};
}

cplx strip_point(const HornMap& hm, double x, double dy) {
  return {-hm.strip().t - hm.strip().width * (1 - x), hm.height() + dy};
}

Outcome horn_periodicity() {
  constexpr double kTol = 1e-6;
  constexpr int kSamples = 50;
  const auto& hm = QuadraticPipeline::get(RationalAngle(0, 1))->horn;
  double worst = 0;
  for (int i = 0; i < kSamples; ++i) {
    const cplx w = strip_point(hm, (i + 0.5) / kSamples, 0.25 + 0.1 * i);
    worst = std::max(worst, std::abs(hm.eval(w + 1.0) - hm.eval(w) - 1.0));
  }
  bool increasing = true;
  double prev = -1e300;
  for (double dy = 0.25; dy <= 10.0; dy += 0.25) {
    const double im = hm.eval(strip_point(hm, 0.5, dy)).imag();
    increasing = increasing && im > prev;
    prev = im;
  }
  return {worst <= kTol && increasing,
          fmt("periodicity %.1e", worst) + (increasing ? ", Im h increasing" : ", Im h not increasing")};
}

Outcome unique_critical_value() {
  constexpr double kTol = 1e-6;
  constexpr std::size_t kMinPoints = 5;
  const auto crit = quadratic_critical_structure(QuadraticPipeline::get(RationalAngle(0, 1))->att, RationalAngle(0, 1));
  return {crit.critical_points.size() >= kMinPoints && crit.spread <= kTol,
          std::to_string(crit.critical_points.size()) + " points" + fmt(", spread %.1e", crit.spread)};
}

Outcome centralizer_round_trip() {
  constexpr double kMuTol = 1e-6;
  bool ok = true;
  int identified = 0;
  double worst_mu = 0;
  std::string bad;
  for (const auto& pq : {RationalAngle(0, 1), RationalAngle(1, 2), RationalAngle(1, 3)}) {
    const auto q = quadratic_germ(pq, 32);
    for (int m = -2; m <= 3; ++m) {
      const auto v = centralizer_test(pq, iterate(q, m));
      const bool hit = v.identified_power && *v.identified_power == m && v.mu_distance < kMuTol;
      worst_mu = std::max(worst_mu, v.mu_distance);
      if (hit) ++identified;
      else bad += " " + pq.str() + "^" + std::to_string(m);
      ok = ok && hit;
    }
  }
  return {ok, std::to_string(identified) + "/18 identified" + fmt(", max |mu-round mu| %.1e", worst_mu) + bad};
}

Outcome root_of_unity_gate() {
  constexpr double kResidual = 1e-10;
  bool rejected = false;
  try {
    commutant_solve(quadratic_germ(0.0, 16), cplx(0, 1), 16);
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::no_solution;
  }
  const auto F2 = iterate(quadratic_germ(RationalAngle(1, 2), 16), 2);
  const double res = commutant_solve(F2, -1.0, 16).report.residual_norm;
  return {rejected && res < kResidual, std::string(rejected ? "b1=i rejected" : "b1=i accepted") +
                                           fmt(", b1=-1 residual %.1e", res)};
}

Outcome k_set_finiteness() {
  KSetOptions a, b;
  a.order = 16;
  b.order = 32;
  const auto ka = k_set_widened(RationalAngle(0, 1), 1.0, a);
  const auto kb = k_set_widened(RationalAngle(0, 1), 1.0, b);
  std::ostringstream ss;
  ss << "K = {";
  for (std::size_t i = 0; i < ka.members.size(); ++i) ss << (i ? "," : "") << ka.members[i];
  ss << "} window [" << ka.k_min << "," << ka.k_max << "]";
  return {!ka.capped && !kb.capped && ka.members == kb.members, ss.str()};
}

Outcome circle_invariance() {
  constexpr double kTol = 1e-12;
  constexpr int kSamples = 1000;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1), ub(1e-3, kMaxArnoldB - 1e-3);
  double worst = 0;
  for (int i = 0; i < kSamples; ++i) {
    const ArnoldSystem sys(u(rng), ub(rng));
    worst = std::max(worst, std::abs(std::abs(sys.complexified(std::polar(1.0, 2 * std::numbers::pi * u(rng)))) - 1));
  }
  return {worst <= kTol, fmt("max ||f(w)|-1| %.1e", worst)};
}

Outcome tongue_zero_boundary() {
  constexpr double kTol = 1e-9;
  double worst_a = 0, worst_m = 0;
  for (double b : {0.02, 0.05, 0.1}) {
    const auto p = parabolic_parameter(RationalAngle(0, 1), b, TongueSide::right);
    worst_a = std::max(worst_a, std::abs(p.a - b));
    worst_m = std::max(worst_m, std::abs(p.cycle.multiplier - 1.0));
  }
  return {worst_a <= kTol && worst_m <= kTol, fmt("|a-b| %.1e", worst_a) + fmt(", |multiplier-1| %.1e", worst_m)};
}

Outcome rotation_monotonicity() {
  constexpr int kGrid = 100;
  constexpr double kB = 0.1;
  double prev_lower = -1e300;
  int violations = 0;
  double widest = 0;
  for (int i = 0; i < kGrid; ++i) {
    const auto r = rotation_number(ArnoldSystem(static_cast<double>(i) / kGrid, kB));
    if (r.upper < prev_lower) ++violations;
    prev_lower = r.lower;
    widest = std::max(widest, r.upper - r.lower);
  }
  return {violations == 0, std::to_string(violations) + " violations" + fmt(", widest interval %.1e", widest)};
}

Outcome circle_horn_symmetry() {
  constexpr double kTol = 1e-6;
  const auto pipe = CirclePipeline::at_tongue(RationalAngle(0, 1), 0.1);
  const auto crit = circle_critical_values(pipe);
  return {crit.arg_defect < kTol, fmt("|arg v1 - arg v2| %.1e", crit.arg_defect)};
}

Outcome sequence_builders() {
  constexpr int kStages = 4;
  const auto alpha = build_alpha_sequence(kStages);
  const auto a = a_sequence_builder(0.15, kStages);
  bool ok = alpha.complete && a.complete && alpha.stages.size() == kStages && a.stages.size() == kStages;
  std::ostringstream ss;
  ss << "alpha:";
  for (const auto& s : alpha.stages) {
    ok = ok && s.all_ok();
    ss << " " << s.pq.str();
  }
  ss << "  a(b=0.15):";
  for (const auto& s : a.stages) {
    ok = ok && s.all_ok();
    ss << " " << s.pq.str();
  }
  if (!alpha.diagnostics.empty()) ss << " [" << alpha.diagnostics << "]";
  if (!a.diagnostics.empty()) ss << " [" << a.diagnostics << "]";
  return {ok, ss.str()};
}

}  // namespace

int main() {
  criterion(1, "series oracle", 1, series_oracle);
  criterion(2, "parabolic normalization", 5, parabolic_normalization);
  criterion(3, "Abel residual z+z^2", 60, [] { return abel_residual(RationalAngle(0, 1)); });
  criterion(3, "Abel residual Q_1/2^2", 60, [] { return abel_residual(RationalAngle(1, 2)); });
  criterion(4, "horn periodicity", 60, horn_periodicity);
  criterion(5, "unique critical value", 120, unique_critical_value);
  criterion(6, "centralizer round trip", 600, centralizer_round_trip);
  criterion(7, "root-of-unity gate", 5, root_of_unity_gate);
  criterion(8, "K-set finiteness", 60, k_set_finiteness);
  criterion(9, "circle invariance", 1, circle_invariance);
  criterion(10, "0/1 tongue boundary", 30, tongue_zero_boundary);
  criterion(11, "rotation monotonicity", 300, rotation_monotonicity);
  criterion(12, "circle horn symmetry", 300, circle_horn_symmetry);
  criterion(13, "sequence builders", 600, sequence_builders);
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
