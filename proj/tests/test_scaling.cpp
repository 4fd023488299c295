#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "thinfilm/analysis.hpp"
#include "thinfilm/radial.hpp"
#include "thinfilm/rupture.hpp"
#include "thinfilm/scaling.hpp"

using namespace thinfilm;

TEST_CASE("p = 1/alpha scaling is the identity map") {
  const Params canon(3.0, 2, 1.0 / 3.0);
  SolveConfig cfg;
  cfg.r_max = 15.0;
  Trajectory canonical = solve_smooth(canon, 2.0, cfg, 0);
  Trajectory scaled = scale_from_canonical(canon, 2.0, canonical);
  for (double r : {0.1, 1.0, 7.7, 14.5}) {
    CHECK(scaled.evaluate_at(r).h ==
          doctest::Approx(canonical.evaluate_at(r).h).epsilon(1e-14));
    CHECK(scaled.evaluate_at(r).dh ==
          doctest::Approx(canonical.evaluate_at(r).dh).epsilon(1e-12));
  }
}

TEST_CASE("scaled canonical solve equals the direct solve") {
  const double alpha = 3.0;
  const int dim = 2;
  const Params canon(alpha, dim, 1.0 / alpha);
  for (const auto& [p, eta_c] : std::vector<std::pair<double, double>>{
           {3.0, 2.0}, {0.7, 1.6}, {1.3, 0.5}}) {
    const double ap = alpha * p;
    const double eta = std::pow(ap, -1.0 / alpha) * eta_c;
    const Params target(alpha, dim, p);

    SolveConfig cfg;
    cfg.r_max = 20.0;
    Trajectory canonical = solve_smooth(canon, eta_c, cfg, 0);
    Trajectory scaled = scale_from_canonical(target, eta, canonical);

    SolveConfig dcfg;
    dcfg.r_max = scaled.r_back();
    Trajectory direct = solve_smooth(target, eta, dcfg, 0);

    double worst = 0.0;
    const double hi = 0.95 * std::min(scaled.r_back(), direct.r_back());
    for (int i = 1; i <= 100; ++i) {
      const double r = hi * i / 100.0;
      worst = std::max(worst, std::abs(scaled.evaluate_at(r).h -
                                       direct.evaluate_at(r).h));
    }
    CHECK(worst < 1e-8);

    // events map exactly: r_k^{p,eta} = (ap)^{-(1+a)/(2a)} r_k^{canonical}
    const double s_r = std::pow(ap, (1.0 + alpha) / (2.0 * alpha));
    REQUIRE(scaled.events().size() == canonical.events().size());
    for (std::size_t k = 0; k < scaled.events().size(); ++k)
      CHECK(scaled.events()[k] ==
            doctest::Approx(canonical.events()[k] / s_r).epsilon(1e-14));
  }
}

TEST_CASE("rupture trajectory scales too") {
  const double alpha = 3.0;
  const Params canon(alpha, 2, 1.0 / alpha);
  const double p = 2.0;
  const Params target(alpha, 2, p);

  SolveConfig cfg;
  Trajectory canonical = solve_rupture(canon, cfg, 3);
  Trajectory scaled = scale_from_canonical(target, 0.0, canonical);

  SolveConfig dcfg;
  Trajectory direct = solve_rupture(target, dcfg, 3);
  for (double frac : {0.3, 0.8, 0.95}) {
    const double r = frac * std::min(scaled.r_back(), direct.r_back());
    CHECK(scaled.evaluate_at(r).h ==
          doctest::Approx(direct.evaluate_at(r).h).epsilon(1e-7));
  }
  // the near-origin exponent is pressure-invariant: h/r^{1/2} -> c* still
  const double cs = derive_constants(target).c_star;
  CHECK(scaled.evaluate_at(1e-6).h / std::sqrt(1e-6) ==
        doctest::Approx(cs).epsilon(1e-3));
}

TEST_CASE("flat solution maps to the flat solution of the target pressure") {
  const Params canon(3.0, 2, 1.0 / 3.0);
  const Params target(3.0, 2, 2.7);
  SolveConfig cfg;
  cfg.r_max = 8.0;
  Trajectory canonical = solve_smooth(canon, 1.0, cfg, 0);
  const double xi_t = derive_constants(target).xi;
  Trajectory scaled = scale_from_canonical(target, xi_t, canonical);
  for (double r : {0.2, 1.1, 3.0}) {
    CHECK(scaled.evaluate_at(r).h == doctest::Approx(xi_t).epsilon(1e-14));
    CHECK(scaled.evaluate_at(r).dh == 0.0);
  }
}

TEST_CASE("prescribed pressure roundtrip recovers eta") {
  const Params params(3.0, 2, 1.0 / 3.0);
  SolveConfig cfg;
  Trajectory traj = solve_smooth(params, 2.0, cfg, 3);
  const double R_star = traj.events()[2];  // r_3^{p, eta=2}

  const DerivedConstants cons = derive_constants(params);
  const SolutionMenu menu = solve_prescribed_pressure(
      params, R_star, 3, default_eta_grid(cons.xi));

  bool found = false;
  for (const SolutionKey& key : menu.entries) {
    if (key.k == 3 && std::abs(key.eta - 2.0) < 1e-6) {
      found = true;
      CHECK(key.r_k == doctest::Approx(R_star).epsilon(1e-6));
      CHECK(key.pressure == params.pressure);
      CHECK(key.scaled_pressure ==
            doctest::Approx(params.pressure * std::pow(R_star, 1.5))
                .epsilon(1e-6));
      // the k-indexed solution has exactly k-1 interior critical points
      Trajectory check = solve_smooth(params, key.eta, cfg, 3);
      int interior = 0;
      for (double ev : check.events())
        if (ev < R_star * (1.0 - 1e-9)) ++interior;
      CHECK(interior == 2);
    }
  }
  CHECK(found);
}

TEST_CASE("tiny domain leaves only the flat solution") {
  const Params params(3.0, 2, 1.0 / 3.0);
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(1.05 + 0.8 * i);
  const InfR1Record inf = estimate_inf_r1(3.0, 2, grid, 1);
  const double R_tiny = 0.3 * inf.R1_inf;  // canonical == target here
  const SolutionMenu menu = solve_prescribed_pressure(
      params, R_tiny, 2, default_eta_grid(1.0, 16, 10));
  CHECK(menu.entries.empty());
  CHECK(menu.flat_height == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hbar table: rupture asymptotics and scaling invariance") {
  const Params params(3.0, 2, 1.0 / 3.0);
  std::vector<double> grid{0.5, 2.0};
  const FamilyRecord rec = hbar_table(params, grid, 10, true, 0);
  REQUIRE(rec.eta_grid.size() == 3);  // rupture row prepended
  CHECK(rec.eta_grid[0] == 0.0);

  // r_k increasing in k for fixed eta
  for (const auto& row : rec.r_k)
    for (std::size_t k = 0; k + 1 < row.size(); ++k)
      CHECK(row[k] < row[k + 1]);

  // rupture row: sqrt(k pi) hbar_k drifts toward 1
  const double dev10 =
      std::abs(std::sqrt(10.0 * M_PI) * rec.hbar[0][9] - 1.0);
  CHECK(dev10 < 0.1);

  // scaling invariance hbar(p, eta, k) = hbar(1/alpha, (ap)^{1/a} eta, k)
  const double p = 0.8;
  const Params target(3.0, 2, p);
  const double ap = 3.0 * p;
  const double eta_target = std::pow(ap, -1.0 / 3.0) * 2.0;  // eta_c = 2
  SolveConfig cfg;
  Trajectory direct = solve_smooth(target, eta_target, cfg, 2);
  const double rk = direct.events()[1];
  const double hbar_direct =
      average_thickness(direct, rk, target) * std::pow(rk, -0.5);
  CHECK(hbar_direct == doctest::Approx(rec.hbar[2][1]).epsilon(1e-8));
}

TEST_CASE("prescribed volume matches only the hbar_k sequence") {
  const Params canon(3.0, 2, 1.0 / 3.0);
  std::vector<double> none;
  const FamilyRecord rec = hbar_table(canon, none, 4, true, 1);
  const double hbar3 = rec.hbar[0][2];

  const auto hit = solve_prescribed_volume_rupture(3.0, 2, hbar3, 4);
  REQUIRE(hit.has_value());
  CHECK(hit->k == 3);
  CHECK(hit->eta == 0.0);
  CHECK(hit->hbar == doctest::Approx(hbar3).epsilon(1e-9));

  // exactly k-1 interior critical points once rescaled to B_1
  SolveConfig cfg;
  Trajectory traj = solve_rupture(canon, cfg, 4);
  int interior = 0;
  for (double ev : traj.events())
    if (ev < hit->r_k * (1.0 - 1e-9)) ++interior;
  CHECK(interior == hit->k - 1);

  CHECK_FALSE(solve_prescribed_volume_rupture(3.0, 2, 123.0, 4).has_value());
  CHECK_FALSE(
      solve_prescribed_volume_rupture(3.0, 2, hbar3 * 1.01, 4).has_value());
}

TEST_CASE("infimum sweep is monotone") {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(1.05 * std::pow(20.0, i / 9.0));
  const InfR1Record rec = estimate_inf_r1(3.0, 2, grid, 4);
  for (std::size_t k = 0; k + 1 < rec.R_k.size(); ++k)
    CHECK(rec.R_k[k + 1] >= rec.R_k[k] * (1.0 - 1e-12));
  for (std::size_t k = 0; k + 1 < rec.p_k.size(); ++k)
    CHECK(rec.p_k[k + 1] >= rec.p_k[k] * (1.0 - 1e-12));
  CHECK(rec.R1_inf > 0.0);
  CHECK(rec.argmin_eta > 1.0);

  // r_1(eta) grows along the upper tail of the grid
  SolveConfig cfg;
  Trajectory a = solve_smooth(Params(3.0, 2, 1.0 / 3.0), grid[7], cfg, 1);
  Trajectory b = solve_smooth(Params(3.0, 2, 1.0 / 3.0), grid[9], cfg, 1);
  CHECK(b.events()[0] > a.events()[0]);
}
