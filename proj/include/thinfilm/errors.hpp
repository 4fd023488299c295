#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

/// Base class for all runtime failures raised by the solvers.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// h fell below the positivity floor. Analytically impossible for exact
/// solutions, so this flags a numerical failure (tolerances too loose).
struct PositivityBreach : SolverError {
  double r = 0.0;
  double h = 0.0;
  PositivityBreach(double r_, double h_)
      : SolverError("positivity breach: h(" + std::to_string(r_) + ") = " +
                    std::to_string(h_) + " fell below the configured floor"),
        r(r_), h(h_) {}
};

/// Adaptive step size underflowed or the step budget ran out.
struct StepFailure : SolverError {
  using SolverError::SolverError;
};

/// Picard iterates left the contraction ball or the update norm grew.
struct NoContraction : SolverError {
  using SolverError::SolverError;
};

struct MaxIterExceeded : SolverError {
  using SolverError::SolverError;
};

/// Fewer events/spacings available than the caller requested.
struct InsufficientRange : SolverError {
  using SolverError::SolverError;
};

/// Evaluation point outside the trajectory (or quadrature) range.
struct OutOfRange : SolverError {
  using SolverError::SolverError;
};

}  // namespace thinfilm
