#pragma once

#include <optional>
#include <vector>

#include "thinfilm/trajectory.hpp"

namespace thinfilm {

/// Identifies one Neumann solution: h^{p,eta} restricted to the ball of its
/// k-th critical radius. eta == 0 encodes the rupture solution.
struct SolutionKey {
  double pressure;         ///< base pressure p of the family
  double eta;              ///< center height (0 = rupture)
  int k;                   ///< 1-based index of the Neumann radius
  double r_k;              ///< k-th critical radius of h^{p,eta}
  double hbar;             ///< average thickness of the B_1-rescaled solution
  double scaled_pressure;  ///< p^{p,eta,k} = p (r_k)^{2a/(1+a)}
};

/// Exact scaling map: h^{p,eta}(x) = (ap)^{-1/a} h^{1/a, (ap)^{1/a} eta}
/// ((ap)^{(1+a)/(2a)} x). `canonical` must be a solve at pressure 1/alpha
/// whose center height matches (ap)^{1/a} eta; the segments are transformed
/// in closed form, so the map adds no interpolation error.
Trajectory scale_from_canonical(const Params& target, double eta,
                                const Trajectory& canonical);

struct SolutionMenu {
  double flat_height;  ///< xi(p); the flat solution is always on the menu
  std::vector<SolutionKey> entries;
};

/// All radial Neumann solutions on B_R at pressure p with index k <= k_max:
/// bracketed roots of r_k(eta) = R over the eta grid (bisection on each
/// bracket; r_k(eta) need not be monotone so all bracketed roots are
/// returned) plus the rupture entry when r_k^{p,0} matches R to
/// rupture_match_rtol. An empty entry list (flat only) is a valid answer.
SolutionMenu solve_prescribed_pressure(const Params& params, double R,
                                       int k_max,
                                       const std::vector<double>& eta_grid,
                                       double rupture_match_rtol = 1e-6);

/// (eta, k) table of critical radii and rescaled average thicknesses at the
/// canonical pressure p = 1/alpha. eta values are canonical (xi = 1); an
/// eta of 0 denotes the rupture row.
struct FamilyRecord {
  double alpha = 0.0;
  int dim = 0;
  int k_max = 0;
  std::vector<double> eta_grid;
  std::vector<std::vector<double>> r_k;   ///< [eta_index][k-1]
  std::vector<std::vector<double>> hbar;  ///< [eta_index][k-1]
};

/// Embarrassingly parallel sweep over the grid (threads <= 0 picks the
/// hardware count). include_rupture prepends the eta = 0 row.
FamilyRecord hbar_table(const Params& params,
                        const std::vector<double>& eta_grid, int k_max,
                        bool include_rupture = true, int threads = 0);

/// Matches hbar_target against the rupture sequence hbar_k on B_1; returns
/// the hit when |hbar_k - target| <= rel_tol * target, else nullopt (no
/// radial rupture solution with that volume).
std::optional<SolutionKey> solve_prescribed_volume_rupture(
    double alpha, int dim, double hbar_target, int k_max,
    double rel_tol = 1e-6);

struct InfR1Record {
  double R1_inf = 0.0;      ///< min of r_1(eta) over the whole grid
  double argmin_eta = 0.0;
  std::vector<double> R_k;  ///< per k: inf of r_k over the eta > 1 branch
  std::vector<double> p_k;  ///< thresholds (1/a) R_k^{2a/(1+a)} for B_1
};

/// Numerical infimum of the critical radii over an eta grid at canonical
/// pressure, and the derived pressure thresholds for the unit ball.
InfR1Record estimate_inf_r1(double alpha, int dim,
                            const std::vector<double>& eta_grid,
                            int k_max = 5);

/// Geometric grid on (1.01 xi, 50 xi] plus (0.02 xi, 0.99 xi].
std::vector<double> default_eta_grid(double xi, int points_upper = 28,
                                     int points_lower = 16);

}  // namespace thinfilm
