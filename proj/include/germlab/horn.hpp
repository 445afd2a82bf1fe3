#pragma once

// Horn map h = φ_att∘φ_rep⁻¹ on the upper part of a vertical strip, the
// induced map H on a punctured disk and the critical structure of φ_att.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "germlab/fatou.hpp"

namespace germlab {

/// Π = {-t - width < Re w < -t}.
struct StripSpec {
  double t = 0;
  double width = 1;

  bool contains_re(double re) const { return re > -t - width && re < -t; }
};

struct HornOptions {
  double t = 0;              // 0 picks 2·s_rep
  double width = 1;
  int columns = 8;           // vertical walks used to locate Π'
  double step = 0.25;
  double bisect_tol = 1e-3;
  double margin = 0.5;
  int basin_budget = 20000;
  double y_top = 0;          // 0 picks t + s_att + 10
};

class HornMap {
 public:
  HornMap(FatouCoordinate att, FatouCoordinate rep, StripSpec strip, int basin_budget);

  const FatouCoordinate& att() const { return att_; }
  const FatouCoordinate& rep() const { return rep_; }
  const StripSpec& strip() const { return strip_; }

  /// Certified lower height Im₀ of the sub-strip used for H.
  double height() const { return height_; }
  double top() const { return top_; }
  /// H is defined on 0 < |ξ| < ρ₀ = e^{-2π Im₀}.
  double rho0() const { return std::exp(-2.0 * std::numbers::pi * height_); }
  double accuracy() const { return att_.accuracy() + rep_.accuracy() + 1e-10; }

  /// h(w) = φ_att(φ_rep⁻¹(w)) with φ_att extended along the orbit.
  cplx eval(cplx w) const;
  PhiJet eval_jet(cplx w) const;
  std::optional<cplx> try_eval(cplx w) const;

  /// z = φ_rep⁻¹(w) lies in B₁.
  bool in_domain(cplx w) const;

  /// H(ξ) = e^{2πi h(ζ)} for e^{2πiζ} = ξ; H(0) = 0.
  cplx induced(cplx xi) const;

 private:
  friend HornMap build_horn(FatouCoordinate att, FatouCoordinate rep, const HornOptions& opts);

  FatouCoordinate att_;
  FatouCoordinate rep_;
  StripSpec strip_;
  int basin_budget_;
  double height_ = 0;
  double top_ = 0;
};

/// Locates the top component Π' by vertical walks with bisection.
HornMap build_horn(FatouCoordinate att, FatouCoordinate rep, const HornOptions& opts = {});

cplx horn_eval(const HornMap& hm, cplx w);
cplx induced_H(const HornMap& hm, cplx xi);

/// Distance between two points of ℂ/ℤ.
double cylinder_distance(cplx a, cplx b);

struct CriticalStructure {
  std::vector<cplx> critical_points;
  std::vector<int> depths;             // F^depth(point) = c₁
  std::vector<cplx> critical_values;   // φ_att(point)
  std::vector<cplx> modded_values;     // representative with Re in [0,1)
  std::vector<cplx> h_values;          // e^{2πi φ_att(point)}
  double spread = 0;                   // max cylinder distance to the first value
  double level_defect = 0;             // max |φ(point) + depth - φ(c₁)|
};

/// Preimages of a point under F (all branches).
using PreimageFn = std::function<std::vector<cplx>(cplx)>;

/// Samples critical points of φ_att as preimages of c₁ inside the basin,
/// breadth first, up to `depth` levels and `max_points` points.
CriticalStructure critical_structure(const FatouCoordinate& att, cplx c1, const PreimageFn& preimages,
                                     int depth, int max_points, int budget = 20000);

/// The critical point of F = Q_{p/q}^{∘q} whose orbit lies in B₁.
cplx quadratic_critical_point(const AnalyticMap& f, const ParabolicData& data, const RationalAngle& pq,
                              int budget = 20000);

/// All 2^q preimages under Q_{p/q}^{∘q}.
PreimageFn quadratic_preimages(const RationalAngle& pq);

CriticalStructure quadratic_critical_structure(const FatouCoordinate& att, const RationalAngle& pq,
                                               int depth = 8, int max_points = 40);

/// max |H(e^{2πiμ}ξ) - e^{2πiμ}H(ξ)| / |H(ξ)| over samples inside the domain.
double rotation_commutation_residual(const HornMap& hm, cplx mu, const std::vector<cplx>& samples);

/// Sample points ξ on circles inside the disk of H.
std::vector<cplx> horn_samples(const HornMap& hm, int count);

}  // namespace germlab
