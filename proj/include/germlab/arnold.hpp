#pragma once

// The Arnold family S_{a,b}(x) = x + a + b sin 2πx and its complexification
// f_{a,b}(w) = e^{2πia} w e^{πb(w - 1/w)}: rotation numbers with certified
// brackets, tongue-boundary (parabolic) parameters, circle critical points,
// and the local chart at a parabolic cycle used by the petal machinery.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "germlab/parabolic.hpp"

namespace germlab {

inline constexpr double kMaxArnoldB = 0.15915494309189535;  // 1/(2π)

class ArnoldSystem {
 public:
  /// Throws out-of-range unless 0 < b < 1/(2π) and a is finite.
  ArnoldSystem(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }

  double lift(double x) const;
  double lift_derivative(double x) const;
  double lift_second_derivative(double x) const;
  cplx lift(cplx x) const;
  cplx lift_derivative(cplx x) const;
  /// S^{∘n}(x) for n >= 0, S^{-n} by monotone inversion for n < 0.
  double lift_iterate(double x, int n) const;
  double lift_inverse(double y) const;

  cplx complexified(cplx w) const;
  cplx complexified_derivative(cplx w) const;
  /// f^{∘k}(w) for k >= 0.
  cplx complexified_iterate(cplx w, int k) const;

 private:
  double a_;
  double b_;
};

/// Reflection in the unit circle, τ(w) = 1/conj(w).
cplx tau(cplx w);

struct RotationNumberOptions {
  int iterations = 1 << 20;
  double x0 = 0;
  int max_period = 64;  // periodic orbits searched up to this period
};

struct RotationNumberResult {
  double value = 0;        // in [0,1)
  double error_bound = 0;  // |ρ - value| <= error_bound
  int iterations = 0;
  std::string method;      // "periodic-orbit" or "bracket"
  double lower = 0;        // certified bracket of the lift's ρ (not reduced)
  double upper = 0;
  std::optional<RationalAngle> rational;  // set when a periodic orbit was found
};

/// Certified by the monotone-lift sandwich: S^n(x) - x in [p, p+1) forces
/// ρ in [p/n, (p+1)/n]. A sign change of S^q(x) - x - p over x certifies
/// ρ = p/q exactly.
RotationNumberResult rotation_number(const ArnoldSystem& sys, const RotationNumberOptions& opts = {});

struct CriticalPoints {
  double c1 = 0;  // in (-1, 0)
  double c2 = 0;  // 1/c1
};

/// Real solutions of w² + w/(πb) + 1 = 0.
CriticalPoints critical_points(const ArnoldSystem& sys);

struct ParabolicCycle {
  int period = 1;
  std::vector<double> angles;  // x_i in [0,1), w_i = e^{2πi x_i}, f(w_i) = w_{i+1}
  cplx multiplier = 1.0;       // (f^{∘n})'(w_1)
  RationalAngle rotation;
  int lift_shift = 0;          // S^{∘n}(x_1) = x_1 + lift_shift

  cplx point(int i) const;
};

enum class TongueSide { left, right };

std::string_view to_string(TongueSide side);
TongueSide tongue_side_from_string(std::string_view name);

struct ParabolicParameter {
  double a = 0;
  ParabolicCycle cycle;
  bool newton_converged = false;
  double tolerance = 0;  // bracket width when Newton was not accepted
};

/// Boundary of the p/q tongue at fixed b: the root of min_x (or max_x) of
/// S^q(x) - x - p in a by bisection, polished by Newton on
/// (S^q(x) - x - p, (S^q)'(x) - 1) in (x, a). For 0/1 the left boundary is
/// reported as a = -b.
ParabolicParameter parabolic_parameter(const RationalAngle& pq, double b, TongueSide side);

/// The local chart z ↦ w_1 e^{iz} at the cycle: F(z) = 2π(S^n(x_1 + z/2π) - x_1 - p),
/// with period 2π and real Taylor coefficients. The jet is exact series
/// arithmetic to `jet_order`.
AnalyticMap circle_return_map(const ArnoldSystem& sys, const ParabolicCycle& cycle, int jet_order = 48);

/// Rotates the labels so that w_1 is the cycle point whose basin contains c₁.
ParabolicCycle relabel_for_critical_point(const ArnoldSystem& sys, const ParabolicCycle& cycle,
                                          int budget = 200000);

/// The forward orbit of e^{2πix} reaches the cycle within `tol` (in angle).
bool circle_orbit_converges(const ArnoldSystem& sys, const ParabolicCycle& cycle, double x, int budget,
                            double tol = 1e-4);

}  // namespace germlab
