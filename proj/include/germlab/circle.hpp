#pragma once

// Analytic circle maps as Laurent descriptors, r-goodness on annuli, the
// sets K'(a,b,r), δ'/κ' estimators and the finite-stage a-sequence, plus the
// Fatou/horn pipeline at a parabolic cycle and the circle centralizer test.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "germlab/arnold.hpp"
#include "germlab/horn.hpp"

namespace germlab {

/// A map of ℂ* near the unit circle, evaluable off the circle.
struct CircleMap {
  std::function<cplx(cplx)> eval;
  std::string name;

  cplx operator()(cplx w) const { return eval(w); }
};

CircleMap circle_identity();
CircleMap rigid_rotation(double theta);  // w ↦ e^{2πiθ} w
/// f_{a,b}^{∘k}; negative k inverts by Newton from the circle.
CircleMap arnold_iterate(const ArnoldSystem& sys, int k);

/// g(w) = Σ c_k w^k from samples on |w| = 1, with fitted decay.
class LaurentDescriptor {
 public:
  /// `on_circle(x)` = g(e^{2πix}); `samples` is a power of two.
  static LaurentDescriptor from_samples(const std::function<cplx(double)>& on_circle, int samples = 1024);
  static LaurentDescriptor from_map(const CircleMap& g, int samples = 1024);

  int samples() const { return samples_; }
  /// c_k for -samples/2 <= k < samples/2.
  cplx coeff(int k) const;
  int k_min() const { return k_min_; }  // most negative retained index
  int k_max() const { return k_max_; }
  /// Fitted annulus of holomorphy r_in < |w| < r_out.
  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  bool decayed() const { return decayed_pos_ && decayed_neg_; }
  bool decayed_positive() const { return decayed_pos_; }
  bool decayed_negative() const { return decayed_neg_; }
  /// Bound on the discarded terms on |w| = rho.
  double tail_bound(double rho) const;

  cplx eval(cplx w) const;
  /// g on |w| = rho at `count` equally spaced angles (inverse FFT).
  std::vector<cplx> eval_circle(double rho, int count) const;

 private:
  int samples_ = 0;
  std::vector<cplx> coeffs_;  // FFT order
  int k_min_ = 0;
  int k_max_ = 0;
  double r_in_ = 0;
  double r_out_ = 0;
  bool decayed_pos_ = false;
  bool decayed_neg_ = false;
  double floor_ = 0;
  double edge_pos_ = 0;  // |c_{k_max}|
  double edge_neg_ = 0;  // |c_{k_min}|
};

/// Holomorphic on 1/r < |w| < r with image in 1/2 < |w| < 2. Throws
/// undecidable-at-this-order when the coefficients have not decayed and the
/// fitted radius does not already rule r out.
bool is_r_good_circle(const LaurentDescriptor& g, double r);
bool is_r_good_circle(const CircleMap& g, double r, int samples = 1024);

struct KPrimeOptions {
  int initial_half_width = 2;
  int max_half_width = 256;
  int fail_run = 0;  // 0 means q + 2 for a p/q cycle, else 4
  int samples = 1024;
};

struct KPrimeResult {
  std::vector<int> members;
  int k_min = 0;
  int k_max = 0;
  int undecided = 0;  // iterates counted as not r-good because undecidable
  bool capped = false;
};

/// {k : f_{a,b}^{∘k} is r-good}, widening the window until `fail_run`
/// consecutive iterates fail on each side.
KPrimeResult K_prime_set(double a, double b, double r, const KPrimeOptions& opts = {});
KPrimeResult K_prime_set(double a, double b, double r, int q, const KPrimeOptions& opts = {});

struct PrimeEstimate {
  double value = 0;
  bool widened = false;  // no violator found; value is the scan radius
  int scanned = 0;
  std::optional<double> violator;  // parameter of the first violator
  std::string note() const;
};

/// Distance from a to the nearest scanned tongue-boundary parameter a' (p'/q'
/// with q' <= denom_cap) with K'(a',b,r) ⊄ K'(a,b,r).
PrimeEstimate delta_prime_estimate(double a, double b, double r, int denom_cap = 6, double window = 0.25);

/// Largest d on a dyadic ladder such that for a' = a ± d' (d' <= d) every
/// r-good iterate f_{a'}^{∘k} has |kρ(a') - k''ρ(a)| < ε mod 1 for some
/// k'' in K'(a,b,r).
PrimeEstimate kappa_prime_estimate(double a, double b, double r, double eps, double window = 0.25,
                                   int levels = 10);

struct CircleSequenceStage {
  RationalAngle pq;
  double a = 0;
  double delta_est = 0;  // δ'(a_n, b, r_n)
  double kappa_est = 0;  // min over l <= n of κ'(a_n, b, r_l, 1/n)
  bool delta_ok = true;
  bool kappa_ok = true;
  bool rho_ok = true;
  bool increasing = true;
  bool k_inclusion = true;   // K'(a_n,b,r_j) ⊆ K'(a_j,b,r_j)
  bool rho_certified = true;  // ρ(f_{a_n,b}) = p_n/q_n by a periodic orbit
  bool all_ok() const { return delta_ok && kappa_ok && rho_ok && increasing && k_inclusion && rho_certified; }
};

struct CircleSequenceOptions {
  int denom_cap = 6;
  double window = 0.25;
  int kappa_levels = 10;
  int digits = 30;
};

struct CircleSequence {
  double b = 0;
  std::vector<CircleSequenceStage> stages;
  std::string a_hat;
  std::string rho_interval_lo;
  std::string rho_interval_hi;
  std::int64_t min_denominator_inside = 0;  // no rational of smaller denominator in the open interval
  bool complete = false;
  std::string diagnostics;
  std::string provenance;
};

/// r_j = 1 + 1/j. Parameters are right tongue boundaries, starting at a_1 = b.
CircleSequence a_sequence_builder(double b, int stages, const CircleSequenceOptions& opts = {});

/// Fatou coordinates and horn map of F = f^{∘n} at w_1, in the chart w = w_1 e^{iz}.
struct CirclePipeline {
  ArnoldSystem sys;
  ParabolicCycle cycle;
  AnalyticMap map;
  ParabolicData data;
  FatouCoordinate att;
  FatouCoordinate rep;
  HornMap horn;
  CriticalPoints critical;
  cplx z_c1;  // c₁ and c₂ = τ(c₁) in the chart
  cplx z_c2;

  static CirclePipeline build(const ArnoldSystem& sys, const ParabolicCycle& cycle);
  /// Parabolic parameter of the pq tongue (right boundary) at b.
  static CirclePipeline at_tongue(const RationalAngle& pq, double b);

  cplx to_chart(cplx w) const;
  cplx from_chart(cplx z) const;
};

struct CircleCriticalValues {
  cplx phi1;  // φ_att(c₁)
  cplx phi2;  // φ_att(c₂)
  cplx v1;    // e^{2πiφ_att(c₁)}
  cplx v2;
  double arg_defect = 0;  // |arg v₁ - arg v₂| mod 2π
};

CircleCriticalValues circle_critical_values(const CirclePipeline& pipe, int budget = 200000);

/// max |φ_att(conj z) - conj φ_att(z)| over attracting petal samples.
double tau_symmetry_residual(const CirclePipeline& pipe, int count = 16);

struct CircleCentralizerOptions {
  double commute_tol = 1e-8;
  double cycle_tol = 1e-8;
  double identity_tol = 1e-9;
  double integer_tol = 1e-6;
  double map_tol = 1e-8;
  double jet_radius = 0.05;
  int samples = 16;
  bool horn = true;
};

struct CircleCentralizerVerdict {
  int k = 0;  // f^{∘k}(g(w₁)) = w₁
  cplx b1;
  cplx b2;
  cplx mu;
  double mu_distance = 0;
  bool re_mu_integer = false;  // arg test of the critical values
  bool im_mu_zero = false;
  bool multiplicity_ok = false;
  std::optional<std::int64_t> identified_power;
  double power_distance = 0;
  double commutation = 0;
  double translation_att = 0;
  double translation_rep = 0;
  double horn_rotation = 0;
  double critical_arg_defect = 0;
  double tau_defect = 0;
};

CircleCentralizerVerdict circle_centralizer_test(const CirclePipeline& pipe, const CircleMap& g,
                                                 const CircleCentralizerOptions& opts = {});

}  // namespace germlab
