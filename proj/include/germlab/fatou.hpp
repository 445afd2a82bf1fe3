#pragma once

// Attracting and repelling Fatou coordinates.
//
// The Abel equation φ∘F = φ + 1 is solved formally in the z coordinate,
//
//   φ_asym(z) = Σ_{j=1..q} p_j z^{-j} + B log(z/v) + Σ_{k=1..M} e_k z^k,
//
// which is triangular in the unknowns (p_q = -1/(q a_{q+1}) reproduces I).
// The true coordinate is the limit φ(z) = φ_asym(F^n(z)) - n along forward
// orbits (attracting) or φ_asym(F^{-n}(z)) + n along backward orbits
// (repelling), stopped once the orbit is deep in the petal.

#include <complex>
#include <optional>
#include <vector>

#include "germlab/parabolic.hpp"

namespace germlab {

struct AbelExpansion {
  int q = 1;
  std::vector<cplx> laurent;  // p_1..p_q
  cplx log_coeff;             // B
  std::vector<cplx> taylor;   // e_1..e_M

  cplx value(cplx z, cplx log_ref) const;
  cplx derivative(cplx z) const;
};

/// Formal solution of the Abel equation through order z^{q+M}.
AbelExpansion abel_expansion(const Germ& jet, int q, int taylor_terms);

struct FatouOptions {
  double target_accuracy = 1e-10;
  int max_depth = 200000;
  int taylor_terms = 0;  // 0 picks 12q + 8
  int cert_grid = 32;
};

struct PhiJet {
  cplx value;
  cplx derivative;
  int steps = 0;
};

class FatouCoordinate {
 public:
  PetalKind kind() const { return kind_; }
  const ParabolicData& data() const { return data_; }
  const AnalyticMap& map() const { return f_; }
  const AbelExpansion& expansion() const { return expansion_; }
  LiftedMap lifted() const { return LiftedMap(f_, data_, kind_); }

  /// Φ(ζ) ≈ ζ - A log ζ + ...; A = B/q.
  cplx asymptotic_log_coeff() const { return expansion_.log_coeff / static_cast<double>(data_.q); }
  cplx anchor() const { return anchor_; }
  double accuracy() const { return accuracy_; }
  int max_depth() const { return max_depth_; }
  double stop_radius() const { return stop_s_; }

  /// φ on the certified petal I⁻¹(Ω^s); throws outside-petal elsewhere.
  cplx eval_phi(cplx z) const;
  PhiJet eval_phi_jet(cplx z) const;

  /// Φ(ζ) = φ(I⁻¹(ζ)) on Ω^s.
  cplx eval_Phi(cplx zeta) const;

  /// Unchecked evaluation along the orbit; no petal check on the start point.
  PhiJet evaluate_raw(cplx z) const;

  /// Solves φ(z) = w near the petal; nullopt on Newton failure.
  std::optional<cplx> inverse(cplx w) const;

  /// Abel residual |Φ(F̃(ζ)) - Φ(ζ) - 1| at ζ.
  double abel_residual(cplx zeta) const;

  /// Orbit point is deep enough for the asymptotic expansion.
  bool deep(cplx z) const;

 private:
  friend FatouCoordinate build_fatou(const AnalyticMap&, const ParabolicData&, PetalKind, const FatouOptions&);

  FatouCoordinate(AnalyticMap f, ParabolicData data, PetalKind kind)
      : f_(std::move(f)), data_(std::move(data)), kind_(kind) {}

  cplx asym_inverse(cplx u) const;

  AnalyticMap f_;
  ParabolicData data_;
  PetalKind kind_;
  AbelExpansion expansion_;
  cplx offset_{};  // additive constant fixing the anchor
  cplx anchor_{};
  double stop_s_ = 0;
  double accuracy_ = 0;
  int max_depth_ = 0;
};

/// Builds and certifies Φ on a grid of Ω^s; normalized by Φ(±2s) = ±2s.
FatouCoordinate build_fatou(const AnalyticMap& f, const ParabolicData& data, PetalKind kind,
                            const FatouOptions& opts = {});

/// Points of Ω^s_kind used for certification (kinked-coordinate grid).
std::vector<cplx> sector_grid(PetalKind kind, double s, int n, double extent);

/// φ_att(F^k(z)) - k for the first k with F^k(z) in the certified petal.
cplx extend_attracting(const FatouCoordinate& att, cplx z, int budget);
PhiJet extend_attracting_jet(const FatouCoordinate& att, cplx z, int budget);

enum class BasinVerdict { in_B1, escaped, undecided };
std::string_view to_string(BasinVerdict verdict);

struct BasinQuery {
  cplx point;
  BasinVerdict verdict = BasinVerdict::undecided;
  int steps = 0;
  bool entered_other_petal = false;  // reached 0 along another attracting direction
};

BasinQuery basin_test(const AnalyticMap& f, const ParabolicData& data, cplx z, int budget);

/// Reduces z by the map's translation period to the copy nearest 0.
cplx reduce_period(const AnalyticMap& f, cplx z);

}  // namespace germlab
