#pragma once

// Decides whether a germ commuting with Q_{p/q} is an iterate of it: reduce
// to G = Q^{∘j}∘g tangent to the identity, read μ = b_{q+1}/a_{q+1}, test the
// translation conjugacy on both petals and the horn-map rotation symmetry.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "germlab/horn.hpp"

namespace germlab {

/// Return map F = Q^{∘q} of a rational angle with its normalization, both
/// Fatou coordinates and the horn map. Built once per angle and shared.
struct QuadraticPipeline {
  RationalAngle pq;
  Germ q_germ;  // Q_{p/q} at the pipeline order
  AnalyticMap map;
  ParabolicData data;
  FatouCoordinate att;
  FatouCoordinate rep;
  HornMap horn;

  static std::shared_ptr<const QuadraticPipeline> get(const RationalAngle& pq);
};

struct CentralizerOptions {
  double commute_tol = 1e-8;   // relative commutator norm
  double root_tol = 1e-8;      // |b1^q - 1|
  double identity_tol = 1e-9;  // G counts as the identity below this
  double integer_tol = 1e-6;   // |μ - round μ|
  double germ_tol = 1e-8;      // relative coefficient distance to Q^{∘m}
  int samples = 16;
  bool horn = true;
};

struct CentralizerResiduals {
  double commutation = 0;
  double translation_att = 0;
  double translation_rep = 0;
  double fatou_att = 0;  // |φ_att(G(z)) - φ_att(z) - μ|
  double horn_rotation = 0;
};

struct CentralizerVerdict {
  std::complex<double> b1;
  int j = 0;
  std::complex<double> mu;
  double mu_distance = 0;  // |μ - round μ|
  bool mu_is_integer = false;
  bool multiplicity_ok = false;  // G = id or G has multiplicity q+1
  std::optional<std::int64_t> identified_power;
  double power_distance = 0;  // relative coefficient distance to Q^{∘(qμ-j)}
  int order = 0;
  CentralizerResiduals residuals;
};

CentralizerVerdict centralizer_test(const RationalAngle& pq, const Germ& g, const CentralizerOptions& opts = {});

using PlaneMap = std::function<cplx(cplx)>;

/// max |G(z) - φ⁻¹(φ(z) + μ)| over the samples.
double translation_residual(const FatouCoordinate& fc, const PlaneMap& g, cplx mu, const std::vector<cplx>& samples);

/// Points of the petal I⁻¹(Ω^t) of the coordinate's kind.
std::vector<cplx> petal_samples(const FatouCoordinate& fc, double t, int count);

}  // namespace germlab
