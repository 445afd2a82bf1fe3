#pragma once

// Empirical δ/κ estimators for the K-set inclusions near a rational angle,
// a finite-stage builder of rationals p_n/q_n constrained by them, and the
// multiplier rigidity check for irrational angles.
//
// δ and κ come from compactness arguments with no formula; the estimators
// below scan finitely many candidates and say so in their provenance.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "germlab/series.hpp"

namespace germlab {

using Rational = boost::multiprecision::cpp_rational;

Rational to_rational(const RationalAngle& pq);
/// Exact value of a finite double.
Rational to_rational(double x);

/// Simplest rational (least denominator) strictly between lo and hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

/// Decimal expansion with `digits` digits after the point (truncated).
std::string decimal_string(const Rational& x, int digits);

struct EstimatorProvenance {
  int order = 0;       // truncation of the germs
  int denom_cap = 0;   // scan bound
  int scanned = 0;     // candidates examined
  bool widened = false;  // no violator found; value is the scan radius
  bool k_stable = true;  // K set unchanged under N -> 2N
  std::string note() const;
};

struct DeltaEstimate {
  double delta = 0;
  std::optional<RationalAngle> violator;
  std::vector<int> base_k;
  EstimatorProvenance provenance;
};

/// Largest radius around p/q within which every scanned p'/q' has
/// K(p'/q', r) ⊆ K(p/q, r). Candidates: rationals with q' <= denom_cap and
/// the Farey neighbours p'/q' of p/q with q' <= denom_cap·q, inside 1/q².
DeltaEstimate delta_estimate(const RationalAngle& pq, double r, int denom_cap = 24, int order = 16);

struct KappaEstimate {
  double kappa = 0;
  int feasible = 0;  // r-good formal commutants seen
  EstimatorProvenance provenance;
};

/// Largest scanned distance d such that for α = p/q ± d' (d' <= d on a
/// dyadic ladder) every multiplier e^{2πiβ} on a β-grid whose formal
/// commutant with Q_α is r-good has |β - k p/q| < ε mod 1 for some k in
/// K(p/q, r). The ladder stops at 1/denom_cap².
KappaEstimate kappa_estimate(const RationalAngle& pq, double r, double eps, int denom_cap = 4096, int order = 12);

/// K(x, r) ⊆ K(y, r), both computed with window widening at truncation N.
bool k_inclusion(const RationalAngle& x, const RationalAngle& y, double r, int order = 16);

struct SequenceStage {
  RationalAngle pq;
  double delta_est = 0;  // δ(p_n/q_n, 1/n)
  double kappa_est = 0;  // min over l <= n of κ(p_n/q_n, 1/l, 1/n)
  bool delta_ok = true;       // against every earlier stage
  bool kappa_ok = true;
  bool rho_ok = true;
  bool increasing = true;
  bool k_inclusion = true;  // direct check K(p_n/q_n,1/j) ⊆ K(p_j/q_j,1/j)
  bool all_ok() const { return delta_ok && kappa_ok && rho_ok && increasing && k_inclusion; }
};

struct AlphaSequenceOptions {
  RationalAngle start{0, 1};
  int denom_cap = 24;
  int order = 16;         // K sets
  int kappa_order = 12;   // formal commutants
  int digits = 40;
};

struct AlphaSequence {
  std::vector<SequenceStage> stages;
  std::string alpha_hat;    // p_n/q_n in decimal
  std::string error_bound;  // 1/q_n²
  bool complete = false;
  std::string diagnostics;
  std::string provenance;
};

AlphaSequence build_alpha_sequence(int stages, const AlphaSequenceOptions& opts = {});

struct RigidityReport {
  bool rigid = false;
  double commutator = 0;            // max |coeff of Q_α∘g - g∘Q_α|
  double distance_to_identity = 0;  // max |g_k - δ_k1|
  std::vector<int> resonant;
};

/// g'(0) = 1: the order-by-order commutation forces g = z up to order N.
RigidityReport multiplier_rigidity(double alpha, const Germ& g, int order, double tol = 1e-9);
bool multiplier_rigidity_check(double alpha, const Germ& g, int order);

}  // namespace germlab
