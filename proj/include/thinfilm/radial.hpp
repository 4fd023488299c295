#pragma once

#include "thinfilm/trajectory.hpp"

namespace thinfilm {

/// Series start for the regular initial condition h(0) = eta, h'(0) = 0:
///   h(r0)  = eta - f(eta) r0^2 / (2N)
///   h'(r0) = -f(eta) r0 / N
/// Valid for small r0; plugging the returned state into the ODE leaves a
/// residual O(r0^2).
State taylor_start_smooth(const Params& params, double eta, double r0);

/// Pick the step-off radius for a smooth start: the smaller of 1e-3 times
/// the problem length scale and the radius at which the estimated r^4 series
/// remainder reaches abs_tol.
double smooth_start_radius(const Params& params, double eta, double abs_tol);

/// Adaptive integration of h'' + (N-1)/r h' + f(h) = 0 from start.r (> 0)
/// to config.r_max, locating every h' = 0 crossing. For kind == kSmooth,
/// eta must be the center height and start must come from
/// taylor_start_smooth; the trajectory is then extended down to r = 0 with
/// the series segment so that samples begin at (0, eta, 0).
///
/// Throws PositivityBreach if h falls below the floor, StepFailure on step
/// underflow.
Trajectory integrate(const Params& params, const State& start,
                     const SolveConfig& config, SolutionKind kind,
                     double eta = 0.0);

/// Convenience driver: full smooth solve for h(0) = eta.
/// Exactly one of config.r_max / k_target governs the horizon: with
/// k_target > 0 the horizon is grown until that many critical points are
/// found (throws InsufficientRange if that fails repeatedly).
/// eta == xi (within 1e-12 relative) produces the exact flat trajectory.
Trajectory solve_smooth(const Params& params, double eta, SolveConfig config,
                        int k_target = 0);

namespace detail_config {
double h_floor_of(const Params& params, const SolveConfig& config);
double sample_cap_of(const Params& params, const SolveConfig& config);
}  // namespace detail_config

namespace detail_radial {
/// Integration core shared with the rupture assembler: appends the adaptive
/// run from start.r to config.r_max (dense segments, capped samples, refined
/// events) onto an existing builder.
void append_radial_run(TrajectoryBuilder& b, const Params& params,
                       const State& start, const SolveConfig& config);
}  // namespace detail_radial

}  // namespace thinfilm
