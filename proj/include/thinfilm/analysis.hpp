#pragma once

#include <string>
#include <vector>

#include "thinfilm/trajectory.hpp"

namespace thinfilm {

/// Ordered critical radii r_1 < r_2 < ... (zeros of h') with heights and
/// spacings. `violations` records any failed structural check (alternation
/// across xi, strict F-decrease, parity-class monotonicity); callers decide
/// whether to treat them as fatal.
struct CriticalPoints {
  std::vector<double> radii;
  std::vector<double> heights;
  std::vector<double> spacings;
  std::vector<std::string> violations;
  bool verified() const { return violations.empty(); }
};

/// First k_max refined events of the trajectory. A flat trajectory yields an
/// empty list; otherwise throws InsufficientRange when fewer than k_max
/// events were found before r_max.
CriticalPoints critical_points(const Trajectory& traj, int k_max);

struct SpacingDiagnostics {
  double tail_mean;   ///< mean of the last quartile of spacings
  double limit;       ///< pi (alpha p)^{-(1+alpha)/(2 alpha)}
  double deviation;   ///< |tail_mean - limit| / limit
  int tail_count;
  double tail_min, tail_max;
};

/// Requires >= 10 spacings (InsufficientRange otherwise).
SpacingDiagnostics spacing_diagnostics(const CriticalPoints& cp,
                                       const DerivedConstants& constants);

struct EnergySeries {
  std::vector<double> r, e1, e2;
};

/// e1 = h'^2/2 + F(h) (nonincreasing), e2 = r^{2(N-1)} e1 (nondecreasing),
/// evaluated at every recorded sample.
EnergySeries energy_series(const Trajectory& traj);

struct MonotonicityViolation {
  double r_lo, r_hi;
  double jump;  // signed violation magnitude
};

struct MonotonicityReport {
  double tol;
  std::vector<MonotonicityViolation> e1_violations;
  std::vector<MonotonicityViolation> e2_violations;
  bool ok() const { return e1_violations.empty() && e2_violations.empty(); }
};

/// Flags every consecutive-sample pair whose e1 increase (resp. e2 decrease)
/// exceeds tol relative to the local energy scale.
MonotonicityReport check_energy_monotonicity(const EnergySeries& es,
                                             double tol);

/// Closed-form lower bound sqrt(2 N alpha (eta - xi)/(xi^{-a} - eta^{-a}))
/// for the first critical radius; the same expression serves both sides of
/// xi, and the eta -> xi limit is handled analytically.
/// Throws std::domain_error at eta == xi.
double r1_lower_bound(const Params& params, double eta);

struct GrowthBoundsReport {
  double lower_constant;  ///< ((alpha+1)/(4 N alpha))^{1/(alpha+1)}
  bool lower_bound_ok;    ///< h >= lower_constant r^{2/(a+1)} on the region
  double region_end;      ///< where f(h) <= -h^{-a}/(2a) stops holding
  double c2_fit;          ///< sup h / r^{2/(a+1)} over the trajectory
  double slope;           ///< log-log slope of h on the fit window
  double slope_window_lo, slope_window_hi;
  double c_star_ratio;    ///< h/r^{2/(a+1)} at the smallest computed radius
};

/// Near-origin growth diagnostics of a rupture trajectory.
GrowthBoundsReport growth_bounds_check(const Trajectory& traj,
                                       const Params& params);

/// (N / R^N) * integral_0^R h(s) s^{N-1} ds by adaptive Simpson on the
/// interpolant, with geometric refinement toward r = 0 and an analytic
/// near-origin piece for rupture trajectories. Throws OutOfRange if R
/// exceeds the trajectory range.
double average_thickness(const Trajectory& traj, double R,
                         const Params& params);

/// Cumulative variant: averages over [0, R] for every R in `radii`
/// (ascending), reusing the shared inner integrals.
std::vector<double> average_thickness_cumulative(
    const Trajectory& traj, const std::vector<double>& radii,
    const Params& params);

/// Radial C^infinity bump exp(-1/(1-u^2)), u = (r-center)/width, zero
/// outside |u| < 1. Valid as a test function in R^N when center == 0 (ball
/// bump) or center >= width (annulus away from the origin).
struct BumpTestFunction {
  double center;
  double width;
  double value(double r) const;
  double laplacian(double r, int dim) const;
  double support_lo() const;
  double support_hi() const;
};

/// | int h . lap(phi) r^{N-1} - int (h^{-a}/a - p) phi r^{N-1} | over the
/// bump support. Small for any continuous solution, including rupture
/// trajectories with the bump containing the origin.
double weak_form_residual(const Trajectory& traj, const BumpTestFunction& bump,
                          double quad_tol = 1e-9);

}  // namespace thinfilm
