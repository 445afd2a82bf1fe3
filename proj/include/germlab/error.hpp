#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace germlab {

enum class ErrorCode {
  invalid_order,
  invalid_argument,
  non_finite_coefficient,
  not_invertible,
  not_tangent_to_identity,
  indistinguishable_from_identity,
  no_solution,
  petal_certification_failed,
  outside_domain,
  branch_escape,
  iteration_budget_exhausted,
  needs_extended_precision,
  outside_petal,
  not_in_basin,
  undecided,
  inversion_failed,
  critical_point_not_found,
  not_a_centralizer_candidate,
  not_commuting,
  out_of_range,
  undecidable_at_this_order,
  estimator_failure,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every library operation. The code is stable and
/// machine-readable; the message carries diagnostics for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace germlab
