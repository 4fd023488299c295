#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "thinfilm/analysis.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/radial.hpp"
#include "thinfilm/rupture.hpp"

using namespace thinfilm;

namespace {

const Params kBase(3.0, 2, 1.0 / 3.0);

// independent quadrature oracle: composite 10-point Gauss-Legendre over
// geometrically split pieces
double gl10_weighted_integral(const Trajectory& traj, double lo, double hi,
                              int dim) {
  static const double x[5] = {0.14887433898163121, 0.43339539412924719,
                              0.67940956829902441, 0.86506336668898451,
                              0.97390652851717172};
  static const double w[5] = {0.29552422471475287, 0.26926671930999636,
                              0.21908636251598204, 0.14945134915058059,
                              0.06667134430868814};
  std::vector<double> cuts{hi};
  double c = hi;
  while (c > 2.0 * lo && cuts.size() < 100) {
    c *= 0.5;
    if (c <= lo) break;
    cuts.push_back(c);
  }
  cuts.push_back(lo);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::min(cuts[i], cuts[i + 1]);
    const double b = std::max(cuts[i], cuts[i + 1]);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double piece = 0.0;
    for (int q = 0; q < 5; ++q) {
      for (double sgn : {-1.0, 1.0}) {
        const double r = mid + sgn * half * x[q];
        piece += w[q] * traj.evaluate_at(r).h * std::pow(r, dim - 1);
      }
    }
    total += piece * half;
  }
  return total;
}

}  // namespace

TEST_CASE("critical points: flat, smooth, rupture") {
  SolveConfig cfg;
  cfg.r_max = 20.0;
  Trajectory flat = solve_smooth(kBase, 1.0, cfg, 0);
  const CriticalPoints empty = critical_points(flat, 5);
  CHECK(empty.radii.empty());

  Trajectory smooth = solve_smooth(kBase, 2.0, cfg, 12);
  const CriticalPoints cp = critical_points(smooth, 12);
  REQUIRE(cp.radii.size() == 12);
  CHECK(cp.verified());
  CHECK(cp.heights[0] < 1.0);  // smooth eta > xi: first height below xi
  CHECK(cp.spacings.size() == 11);

  Trajectory rupture = solve_rupture(kBase, cfg, 12);
  const CriticalPoints rcp = critical_points(rupture, 12);
  CHECK(rcp.verified());
  CHECK(rcp.radii[0] > 0.0);

  // fewer events than requested
  SolveConfig tiny;
  tiny.r_max = 1.0;
  Trajectory short_run = solve_smooth(kBase, 2.0, tiny, 0);
  CHECK_THROWS_AS(critical_points(short_run, 3), InsufficientRange);
}

TEST_CASE("spacing diagnostics approach the closed-form limit") {
  SolveConfig cfg;
  Trajectory rupture = solve_rupture(kBase, cfg, 50);
  const CriticalPoints cp = critical_points(rupture, 50);
  const DerivedConstants cons = derive_constants(kBase);
  const SpacingDiagnostics sd = spacing_diagnostics(cp, cons);
  CHECK(sd.limit == doctest::Approx(3.14159265358979324).epsilon(1e-15));
  CHECK(sd.tail_count == 12);  // last quartile of 49 spacings
  CHECK(sd.deviation < 0.01);
  CHECK(sd.tail_min > 0.0);
  CHECK(sd.tail_max < 2.0 * sd.limit);

  const CriticalPoints few = critical_points(rupture, 8);
  CHECK_THROWS_AS(spacing_diagnostics(few, cons), InsufficientRange);
}

TEST_CASE("energy series and the corruption control") {
  SolveConfig cfg;
  Trajectory traj = solve_smooth(kBase, 2.0, cfg, 10);
  const EnergySeries es = energy_series(traj);
  CHECK(check_energy_monotonicity(es, 1e-8).ok());

  // e2 / r^{2(N-1)} == e1 identically
  for (std::size_t i = 1; i < es.r.size(); i += es.r.size() / 9) {
    if (es.r[i] <= 0.0) continue;
    CHECK(es.e2[i] / std::pow(es.r[i], 2.0 * (kBase.dim - 1)) ==
          doctest::Approx(es.e1[i]).epsilon(1e-12));
  }

  // corrupted f must produce violations (the verification suites rely on it)
  Params bad = kBase;
  bad.f_shift = 1e-3;
  Trajectory corrupted = solve_smooth(bad, 2.0, cfg, 10);
  const MonotonicityReport rep =
      check_energy_monotonicity(energy_series(corrupted), 1e-8);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("flat solution energies") {
  SolveConfig cfg;
  cfg.r_max = 10.0;
  Trajectory flat = solve_smooth(kBase, 1.0, cfg, 0);
  const EnergySeries es = energy_series(flat);
  const double Fxi = F_eval(kBase, 1.0);
  for (std::size_t i = 0; i < es.r.size(); ++i) {
    CHECK(es.e1[i] == doctest::Approx(Fxi).epsilon(1e-14));
    CHECK(es.e2[i] ==
          doctest::Approx(std::pow(es.r[i], 2.0) * Fxi).epsilon(1e-14));
  }
  CHECK(check_energy_monotonicity(es, 1e-8).ok());
}

TEST_CASE("r1 lower bound formula and measurements") {
  // sqrt(12 / (1 - 1/8)) = sqrt(96/7), frozen from the oracle script
  CHECK(r1_lower_bound(kBase, 2.0) ==
        doctest::Approx(3.70328039909020585).epsilon(1e-14));
  CHECK_THROWS_AS(r1_lower_bound(kBase, 1.0), std::domain_error);

  // no 0/0 near xi: limit sqrt(2 N xi^{alpha+1}) = 2 at the base triple
  CHECK(r1_lower_bound(kBase, 1.0 + 1e-9) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r1_lower_bound(kBase, 1.0 - 1e-9) == doctest::Approx(2.0).epsilon(1e-6));

  // mirrored branch below xi stays positive and finite
  const double below = r1_lower_bound(kBase, 0.3);
  CHECK(below > 0.0);
  CHECK(std::isfinite(below));

  // solver respects the bound on both sides
  SolveConfig cfg;
  for (double eta : {0.3, 0.7, 1.4, 2.0, 5.0}) {
    Trajectory traj = solve_smooth(kBase, eta, cfg, 1);
    CHECK(traj.events()[0] >= r1_lower_bound(kBase, eta) * (1.0 - 1e-9));
  }
}

TEST_CASE("growth bounds of the rupture trajectory") {
  SolveConfig cfg;
  Trajectory traj = solve_rupture(kBase, cfg, 5);
  const GrowthBoundsReport gb = growth_bounds_check(traj, kBase);
  CHECK(gb.lower_constant ==
        doctest::Approx(0.638943104246272476).epsilon(1e-14));
  CHECK(gb.lower_bound_ok);
  CHECK(gb.slope == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(gb.c_star_ratio ==
        doctest::Approx(1.07456993182354192).epsilon(1e-3));
  CHECK_THROWS_AS(growth_bounds_check(solve_smooth(kBase, 2.0, cfg, 1), kBase),
                  std::invalid_argument);
}

TEST_CASE("average thickness: flat, smooth limit, rupture oracle") {
  SolveConfig cfg;
  cfg.r_max = 40.0;
  Trajectory flat = solve_smooth(kBase, 1.0, cfg, 0);
  CHECK(average_thickness(flat, 10.0, kBase) ==
        doctest::Approx(1.0).epsilon(1e-10));

  Trajectory smooth = solve_smooth(kBase, 2.0, cfg, 0);
  const double avg_big = average_thickness(smooth, 39.0, kBase);
  CHECK(std::abs(avg_big - 1.0) < 0.05);  // tends to xi for large R

  // average lies between min and max of h
  double hmin = 1e300, hmax = 0.0;
  for (const State& s : smooth.samples()) {
    if (s.r > 10.0) break;
    hmin = std::min(hmin, s.h);
    hmax = std::max(hmax, s.h);
  }
  const double avg10 = average_thickness(smooth, 10.0, kBase);
  CHECK(avg10 >= hmin);
  CHECK(avg10 <= hmax);

  // rupture: production quadrature vs independent Gauss-Legendre oracle
  Trajectory rupture = solve_rupture(kBase, cfg, 3);
  const double r1 = rupture.events()[0];
  const double prod = average_thickness(rupture, r1, kBase);
  const double r_lo = rupture.samples().front().r;
  const double oracle = (gl10_weighted_integral(rupture, r_lo, r1, kBase.dim)) *
                        kBase.dim / std::pow(r1, kBase.dim);
  CHECK(prod == doctest::Approx(oracle).epsilon(1e-8));

  // cumulative variant consistent with single calls
  const std::vector<double> radii{rupture.events()[0], rupture.events()[1],
                                  rupture.events()[2]};
  const std::vector<double> cum =
      average_thickness_cumulative(rupture, radii, kBase);
  for (int i = 0; i < 3; ++i)
    CHECK(cum[i] ==
          doctest::Approx(average_thickness(rupture, radii[i], kBase))
              .epsilon(1e-9));

  CHECK_THROWS_AS(average_thickness(smooth, 100.0, kBase), OutOfRange);
}

TEST_CASE("weak form residual") {
  SolveConfig cfg;
  cfg.r_max = 12.0;

  // classical region of a smooth solution: integration by parts is exact
  Trajectory smooth = solve_smooth(kBase, 2.0, cfg, 0);
  const double res_smooth =
      weak_form_residual(smooth, BumpTestFunction{5.0, 2.0}, 1e-10);
  CHECK(res_smooth < 1e-8);

  // bump containing the rupture point
  Trajectory rupture = solve_rupture(kBase, cfg, 0);
  const double res_rupture =
      weak_form_residual(rupture, BumpTestFunction{0.0, 0.8}, 1e-9);
  CHECK(res_rupture < 1e-6);

  // residual decreases under quadrature refinement
  const double coarse =
      weak_form_residual(rupture, BumpTestFunction{0.0, 0.8}, 1e-4);
  const double fine =
      weak_form_residual(rupture, BumpTestFunction{0.0, 0.8}, 1e-10);
  CHECK(fine <= coarse + 1e-9);

  CHECK_THROWS_AS(
      weak_form_residual(smooth, BumpTestFunction{20.0, 1.0}, 1e-8),
      OutOfRange);
  CHECK_THROWS_AS(
      weak_form_residual(smooth, BumpTestFunction{0.5, 2.0}, 1e-8),
      std::invalid_argument);
}
