#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "thinfilm/trajectory.hpp"

namespace thinfilm {

/// Fixed point of the contraction operator L on (0, delta]: the corrector
/// psi = phi - 1 of the rescaled rupture profile, sampled on a geometric
/// grid clustered at 0.
struct RuptureLocal {
  double delta = 0.0;
  std::vector<double> r;    ///< ascending grid, r.back() == delta
  std::vector<double> psi;
  int iterations = 0;
  double residual = 0.0;           ///< final sup-norm Picard update
  double contraction_ratio = 0.0;  ///< last observed update-norm ratio
  double max_imag = 0.0;           ///< largest imaginary residue in L
};

/// Picard iteration for psi = L psi starting from psi == 0. The double
/// integral is evaluated with complex arithmetic (the exponents a1, a2 may
/// be complex); the imaginary residue is provably zero and is tracked as a
/// self-check. Throws NoContraction when iterates leave the ball
/// |psi| <= delta or the update norm grows, MaxIterExceeded past max_iter.
RuptureLocal picard_local(const Params& params, const DerivedConstants& cons,
                          double delta, double tol, int max_iter,
                          int nodes_per_decade = 64);

/// State of the log-variable profile: t = -log r, phi(t) = h / (c* r^{2/(a+1)}).
struct NormalizedState {
  double t;
  double phi;
  double dphi;
};

/// Asymptotic start for the backward integration:
///   phi(t)   = 1 + kappa e^{-beta t},  kappa = -C/(beta^2 + A beta + g'(1))
///   phi_t(t) = -beta kappa e^{-beta t}
/// the unique bounded-solution asymptote at t -> infinity.
NormalizedState rupture_tail_start(const Params& params,
                                   const DerivedConstants& cons, double t_big);

/// Backward run of phi_tt - A phi_t + g(phi) + C e^{-beta t} = 0 with dense
/// output; states() lists the accepted steps in integration order
/// (decreasing t).
class NormalizedRun {
 public:
  struct Seg {
    double x0, h;  // t-range [x0 + h, x0], h < 0
    std::array<double, 2> c1, c2, c3, c4, c5;
  };

  const std::vector<NormalizedState>& states() const { return states_; }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  const std::vector<Seg>& segments() const { return segs_; }

  /// Dense evaluation anywhere in [t_end, t_start].
  NormalizedState at(double t) const;

 private:
  friend NormalizedRun integrate_normalized_backward(
      const Params&, const NormalizedState&, double, const SolveConfig&,
      std::optional<double>);
  std::vector<NormalizedState> states_;
  std::vector<Seg> segs_;
  double t_start_ = 0.0, t_end_ = 0.0;
};

/// Integrates from start.t down to t_end. Stable in this direction because
/// both characteristic exponents have positive real part, so homogeneous
/// growth modes decay backward. forcing_override replaces the derived C
/// (test hook; pass 0 for the autonomous equation).
NormalizedRun integrate_normalized_backward(
    const Params& params, const NormalizedState& start, double t_end,
    const SolveConfig& config,
    std::optional<double> forcing_override = std::nullopt);

/// Converts the normalized run to (h, h') via h = c* phi(r) r^{2/(a+1)},
/// prepends the r -> 0 asymptote, then continues with the radial integrator
/// from r = delta to config.r_max. The result has kind == kRupture and
/// h(0+) -> 0.
Trajectory assemble_rupture_trajectory(const Params& params,
                                       const NormalizedRun& run,
                                       const SolveConfig& config);

/// Verification-grade overload: interpolates the Picard grid with finite
/// difference slopes. The normalized-run overload is the production path.
Trajectory assemble_rupture_trajectory(const Params& params,
                                       const RuptureLocal& local,
                                       const SolveConfig& config);

struct NormalizedEnergySeries {
  std::vector<std::pair<double, double>> samples;  ///< (t, phi_t^2/2 + G(phi))
  /// sup over refined steps of |d(energy)/dt - (A phi_t^2 - C e^{-bt} phi_t)|
  double max_identity_residual = 0.0;
};

NormalizedEnergySeries normalized_energy_series(const NormalizedRun& run,
                                                const Params& params);

struct RuptureReport {
  double delta = 0.0;
  double t_big = 0.0;
  int picard_iterations = 0;
  double picard_residual = 0.0;
  double picard_contraction_ratio = 0.0;
  /// sup over the Picard grid of |(1 + psi) - phi_normalized|
  double cross_validation_sup_diff = 0.0;
};

/// Production driver for the unique rupture solution: picks delta by
/// adaptive halving until the Picard iteration contracts, builds the
/// backward-normalized profile, cross-validates the two constructions, and
/// returns the assembled trajectory continued to k_target critical points
/// (or config.r_max when k_target == 0).
Trajectory solve_rupture(const Params& params, SolveConfig config,
                         int k_target = 0, RuptureReport* report = nullptr);

}  // namespace thinfilm
