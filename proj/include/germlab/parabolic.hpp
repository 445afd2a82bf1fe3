#pragma once

// Normalization of a parabolic fixed point at 0 with multiplier +1:
// attraction/repulsion vectors, the coordinate I(z) = -1/(q a z^q), its
// petal branches, and the lifted maps F̃ = I∘F∘I⁻¹.

#include <complex>
#include <functional>
#include <optional>

#include "germlab/series.hpp"

namespace germlab {

using cplx = std::complex<double>;

struct MapJet {
  cplx value;
  cplx derivative;
};

/// A holomorphic map near a fixed point at 0, evaluable with its derivative,
/// together with its Taylor jet at 0.
///
/// `escape_radius` bounds the disk outside of which orbits are declared
/// escaped. `period`, when set, is a real translation T with
/// F(z + T) = F(z) + T (lifted circle maps); basin tests then also accept
/// orbits that land at the translated copies of 0.
class AnalyticMap {
 public:
  using Eval = std::function<MapJet(cplx)>;

  AnalyticMap(Eval eval, Germ jet, double escape_radius, std::optional<double> period = std::nullopt);

  /// Evaluates the truncated jet as a polynomial.
  static AnalyticMap from_germ(const Germ& g, double escape_radius);

  /// F = Q_{p/q}^{∘q}, the q-th iterate of e^{2πip/q} z + z². The jet is exact
  /// (F is a polynomial) and is stored to at least `jet_order`.
  static AnalyticMap quadratic_return_map(const RationalAngle& pq, int jet_order = 64);

  MapJet eval(cplx z) const { return eval_(z); }
  cplx operator()(cplx z) const { return eval_(z).value; }
  const Germ& jet() const { return jet_; }
  double escape_radius() const { return escape_radius_; }
  std::optional<double> period() const { return period_; }

  /// Preimage of y under the branch of F⁻¹ fixing 0, by Newton from y.
  std::optional<cplx> inverse_near_zero(cplx y, int max_iter = 60) const;

 private:
  Eval eval_;
  Germ jet_;
  double escape_radius_;
  std::optional<double> period_;
};

enum class PetalKind { attracting, repelling };

std::string_view to_string(PetalKind kind);
PetalKind petal_kind_from_string(std::string_view name);

/// Attracting: Re ζ > s - |Im ζ|. Repelling: Re ζ < -s + |Im ζ|.
struct SectorSpec {
  PetalKind kind = PetalKind::attracting;
  double s = 0;

  bool contains(cplx zeta) const {
    return kind == PetalKind::attracting ? zeta.real() > s - std::abs(zeta.imag())
                                         : zeta.real() < -s + std::abs(zeta.imag());
  }
};

struct ParabolicData {
  int q = 1;
  cplx a_next;
  cplx v_att;
  cplx v_rep;
  double ball_radius = 0;
  double r_att = 0;  // first-stage sector parameter with I⁻¹(Ω^r) ⊂ W' ∩ B(0,δ)
  double r_rep = 0;
  double s_att = 0;  // final parameter where |F̃ - (ζ+1)| <= 1/4
  double s_rep = 0;

  cplx vector(PetalKind kind) const { return kind == PetalKind::attracting ? v_att : v_rep; }
  double s(PetalKind kind) const { return kind == PetalKind::attracting ? s_att : s_rep; }
  SectorSpec sector(PetalKind kind) const { return {kind, s(kind)}; }
};

struct NormalizeOptions {
  double tol = kDefaultParabolicTol;
  int grid = 64;           // samples per axis in each certification patch
  int max_halvings = 40;   // ball radius search
  int max_doublings = 40;  // sector parameter search
};

/// Finds q, a_{q+1}, v_att, v_rep and certifies δ, s by sampling.
ParabolicData normalize(const AnalyticMap& f, const NormalizeOptions& opts = {});

/// I(z) = -1/(q a_{q+1} z^q).
cplx coord_I(const ParabolicData& data, cplx z);

/// Branch of I⁻¹ whose image contains ε v_att (resp. ε v_rep). Requires ζ in
/// the sector of the given kind with parameter `s`.
cplx inverse_branch(const ParabolicData& data, PetalKind kind, cplx zeta, double s = 0);

/// |arg(z / v)| <= half_angle.
bool in_direction_sector(cplx z, cplx v, double half_angle);

/// z lies in the petal I⁻¹(Ω^s) of the given kind.
bool in_petal(const ParabolicData& data, PetalKind kind, cplx z, double s);

/// F̃ = I∘F∘I⁻¹ on the sector of the given kind.
class LiftedMap {
 public:
  LiftedMap(AnalyticMap f, ParabolicData data, PetalKind kind);

  PetalKind kind() const { return kind_; }
  SectorSpec sector() const { return data_.sector(kind_); }
  const ParabolicData& data() const { return data_; }
  const AnalyticMap& base() const { return f_; }

  /// Throws outside-domain when ζ is outside the certified sector and
  /// branch-escape when F leaves the sector W of the petal direction.
  cplx operator()(cplx zeta) const;

  /// Same computation without the certified-sector check (only the branch
  /// sector is enforced).
  cplx evaluate_unchecked(cplx zeta) const;

 private:
  AnalyticMap f_;
  ParabolicData data_;
  PetalKind kind_;
};

LiftedMap lift(const AnalyticMap& f, const ParabolicData& data, PetalKind kind);

}  // namespace germlab
