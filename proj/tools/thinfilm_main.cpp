// thinfilm: radial steady states of the van der Waals thin-film equation.
//
// Subcommands:
//   smooth   solve h(0) = eta, report critical radii and energy diagnostics
//   rupture  solve the unique h(0) = 0 profile with growth/weak-form reports
//   bvp      prescribed-pressure or prescribed-volume solution menus
//   verify   run the invariant suites; nonzero exit on any failure
//
// Exit codes: 0 success, 2 usage error, 3 solver failure, 4 verification
// failure.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "thinfilm/analysis.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/io.hpp"
#include "thinfilm/radial.hpp"
#include "thinfilm/rupture.hpp"
#include "thinfilm/scaling.hpp"
#include "thinfilm/verify.hpp"
#include "thinfilm/version.hpp"

namespace {

using nlohmann::json;
using namespace thinfilm;

struct CommonArgs {
  double alpha = 3.0;
  int dim = 2;
  double p = 1.0 / 3.0;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double event_tol = 1e-12;
  std::string out;
  std::string timestamp;
  bool gnuplot = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_pressure = true) {
  cmd->add_option("--alpha", a.alpha, "exponent alpha (> 1)");
  cmd->add_option("--dim,-N,--N", a.dim, "space dimension N (>= 2)");
  if (with_pressure) cmd->add_option("--p", a.p, "pressure p (> 0)");
  cmd->add_option("--rel-tol", a.rel_tol, "solver relative tolerance");
  cmd->add_option("--abs-tol", a.abs_tol, "solver absolute tolerance");
  cmd->add_option("--event-tol", a.event_tol,
                  "relative refinement tolerance for h' = 0 roots");
  cmd->add_option("--out", a.out, "output basename (default <outdir>/<cmd>)");
  cmd->add_option("--timestamp", a.timestamp,
                  "fixed manifest timestamp (reproducible runs)");
  cmd->add_flag("--gnuplot", a.gnuplot, "also write a gnuplot script");
}

SolveConfig config_of(const CommonArgs& a) {
  SolveConfig cfg;
  cfg.rel_tol = a.rel_tol;
  cfg.abs_tol = a.abs_tol;
  cfg.event_refine_tol = a.event_tol;
  return cfg;
}

std::string out_base(const CommonArgs& a, const std::string& fallback) {
  if (!a.out.empty()) return a.out;
  return io::default_out_dir() + "/" + fallback;
}

io::RunManifest make_manifest(const std::string& command, const CommonArgs& a,
                              json extra_params) {
  extra_params["alpha"] = a.alpha;
  extra_params["dim"] = a.dim;
  io::RunManifest m;
  m.command = command;
  m.tool_version = kToolVersion;
  m.timestamp = a.timestamp.empty() ? io::timestamp_now() : a.timestamp;
  m.parameters = std::move(extra_params);
  m.tolerances = {{"rel_tol", a.rel_tol},
                  {"abs_tol", a.abs_tol},
                  {"event_refine_tol", a.event_tol}};
  return m;
}

json trajectory_results(const Trajectory& traj, const Params& params,
                        int k_found) {
  const DerivedConstants cons = derive_constants(params);
  json res;
  res["xi"] = cons.xi;
  res["kind"] =
      traj.kind() == SolutionKind::kRupture ? "rupture" : "smooth";
  json r_k = json::array(), heights = json::array(),
       spacings = json::array(), hbar = json::array();
  if (k_found > 0) {
    const CriticalPoints cp = critical_points(traj, k_found);
    std::vector<double> radii(cp.radii.begin(), cp.radii.end());
    const std::vector<double> avg =
        average_thickness_cumulative(traj, radii, params);
    for (int k = 0; k < k_found; ++k) {
      r_k.push_back(cp.radii[k]);
      heights.push_back(cp.heights[k]);
      hbar.push_back(avg[k] * std::pow(cp.radii[k],
                                       -2.0 / (params.alpha + 1.0)));
      if (k > 0) spacings.push_back(cp.spacings[k - 1]);
    }
    res["structure_violations"] = cp.violations;
    if (k_found >= 11) {
      const SpacingDiagnostics sd = spacing_diagnostics(cp, cons);
      res["spacing_diagnostics"] = {{"tail_mean", sd.tail_mean},
                                    {"limit", sd.limit},
                                    {"deviation", sd.deviation},
                                    {"tail_count", sd.tail_count}};
    }
  }
  res["r_k"] = r_k;
  res["heights"] = heights;
  res["spacings"] = spacings;
  res["hbar_at_r_k"] = hbar;

  const MonotonicityReport mono =
      check_energy_monotonicity(energy_series(traj), 1e-8);
  res["energy_monotonicity"] = {
      {"tol", mono.tol},
      {"e1_violations", mono.e1_violations.size()},
      {"e2_violations", mono.e2_violations.size()},
      {"ok", mono.ok()}};
  return res;
}

void write_outputs(const std::string& base, const io::RunManifest& m,
                   const Trajectory& traj, json results, bool gnuplot) {
  io::write_trajectory_csv(base + ".csv", traj);
  io::write_summary_json(base + ".json", m, std::move(results));
  if (gnuplot)
    io::write_gnuplot_script(base + ".gp", base + ".csv", m.command);
}

int cmd_smooth(const CommonArgs& a, double eta, int k_target, double r_max) {
  const Params params(a.alpha, a.dim, a.p);
  const DerivedConstants cons = derive_constants(params);
  SolveConfig cfg = config_of(a);
  cfg.r_max = r_max;

  io::RunManifest m = make_manifest(
      "smooth", a,
      {{"p", a.p}, {"eta", eta}, {"k", k_target}, {"r_max", r_max}});
  const std::string base = out_base(a, "smooth");

  const bool flat = std::abs(eta - cons.xi) <= 1e-12 * cons.xi;
  Trajectory traj = solve_smooth(params, eta, cfg, flat ? 0 : k_target);
  json results = trajectory_results(
      traj, params,
      flat ? 0 : static_cast<int>(traj.events().size()));
  results["flat"] = flat;
  if (flat)
    results["notice"] =
        "eta equals the flat height xi; the solution is constant and has "
        "no critical radii";
  results["eta"] = eta;
  write_outputs(base, m, traj, results, a.gnuplot);
  std::printf("smooth: wrote %s.csv and %s.json (%zu critical points)\n",
              base.c_str(), base.c_str(), traj.events().size());
  return 0;
}

int cmd_rupture(const CommonArgs& a, int k_target, double r_max) {
  const Params params(a.alpha, a.dim, a.p);
  SolveConfig cfg = config_of(a);
  cfg.r_max = r_max;

  io::RunManifest m = make_manifest(
      "rupture", a, {{"p", a.p}, {"k", k_target}, {"r_max", r_max}});
  const std::string base = out_base(a, "rupture");

  RuptureReport rep;
  Trajectory traj = solve_rupture(params, cfg, k_target, &rep);
  json results = trajectory_results(
      traj, params, static_cast<int>(traj.events().size()));
  const GrowthBoundsReport gb = growth_bounds_check(traj, params);
  results["growth"] = {{"slope", gb.slope},
                       {"slope_expected", 2.0 / (params.alpha + 1.0)},
                       {"c_star_ratio", gb.c_star_ratio},
                       {"c_star", derive_constants(params).c_star},
                       {"lower_constant", gb.lower_constant},
                       {"lower_bound_ok", gb.lower_bound_ok},
                       {"c2_fit", gb.c2_fit}};
  results["rupture_solver"] = {
      {"delta", rep.delta},
      {"t_big", rep.t_big},
      {"picard_iterations", rep.picard_iterations},
      {"picard_residual", rep.picard_residual},
      {"cross_validation_sup_diff", rep.cross_validation_sup_diff}};
  const double L = derive_constants(params).spacing_limit /
                   3.14159265358979323846;
  results["weak_form_residual"] =
      weak_form_residual(traj, BumpTestFunction{0.0, 0.8 * L}, 1e-9);
  write_outputs(base, m, traj, results, a.gnuplot);
  std::printf("rupture: wrote %s.csv and %s.json (%zu critical points)\n",
              base.c_str(), base.c_str(), traj.events().size());
  return 0;
}

int cmd_bvp_pressure(const CommonArgs& a, double radius, int k_max,
                     int eta_points) {
  const Params params(a.alpha, a.dim, a.p);
  const DerivedConstants cons = derive_constants(params);
  const std::vector<double> grid =
      default_eta_grid(cons.xi, eta_points, std::max(8, eta_points / 2));
  const SolutionMenu menu =
      solve_prescribed_pressure(params, radius, k_max, grid);

  io::RunManifest m = make_manifest("bvp", a,
                                    {{"p", a.p},
                                     {"mode", "pressure"},
                                     {"radius", radius},
                                     {"k_max", k_max},
                                     {"eta_points", eta_points}});
  const std::string base = out_base(a, "bvp_pressure");

  json entries = json::array();
  for (const SolutionKey& key : menu.entries)
    entries.push_back({{"pressure", key.pressure},
                       {"eta", key.eta},
                       {"k", key.k},
                       {"r_k", key.r_k},
                       {"hbar", key.hbar},
                       {"scaled_pressure", key.scaled_pressure},
                       {"kind", key.eta == 0.0 ? "rupture" : "smooth"}});
  json results{{"flat_height", menu.flat_height},
               {"n_nontrivial", menu.entries.size()},
               {"entries", entries}};
  io::write_summary_json(base + ".json", m, results);

  std::FILE* f = std::fopen((base + ".csv").c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + base + ".csv");
  std::fputs("kind,eta,k,r_k,hbar,scaled_pressure\n", f);
  std::fprintf(f, "flat,%.17g,0,%.17g,%.17g,%.17g\n", menu.flat_height,
               radius, menu.flat_height, a.p);
  for (const SolutionKey& key : menu.entries)
    std::fprintf(f, "%s,%.17g,%d,%.17g,%.17g,%.17g\n",
                 key.eta == 0.0 ? "rupture" : "smooth", key.eta, key.k,
                 key.r_k, key.hbar, key.scaled_pressure);
  std::fclose(f);

  std::printf("bvp pressure: %zu nontrivial solution(s) on B_R plus the "
              "flat solution; wrote %s.{csv,json}\n",
              menu.entries.size(), base.c_str());
  return 0;
}

int cmd_bvp_volume(const CommonArgs& a, double hbar_target, int k_max) {
  const auto key =
      solve_prescribed_volume_rupture(a.alpha, a.dim, hbar_target, k_max);

  io::RunManifest m = make_manifest(
      "bvp", a,
      {{"mode", "volume"}, {"hbar", hbar_target}, {"k_max", k_max}});
  const std::string base = out_base(a, "bvp_volume");

  json results{{"hbar_target", hbar_target}, {"matched", key.has_value()}};
  if (key) {
    results["match"] = {{"pressure", key->pressure},
                        {"eta", key->eta},
                        {"k", key->k},
                        {"r_k", key->r_k},
                        {"hbar", key->hbar},
                        {"scaled_pressure", key->scaled_pressure}};
    std::printf("bvp volume: matched rupture index k = %d (hbar_k = %.12g)\n",
                key->k, key->hbar);
  } else {
    std::printf("bvp volume: no rupture solution with hbar = %.12g (not a "
                "member of the hbar_k sequence)\n",
                hbar_target);
  }
  io::write_summary_json(base + ".json", m, results);
  return 0;
}

int cmd_verify(const CommonArgs& a, std::vector<std::string> suites,
               double perturb_f) {
  if (suites.empty() ||
      (suites.size() == 1 && suites[0] == "all"))
    suites = verify::suite_names();
  for (const auto& s : suites) {
    bool known = false;
    for (const auto& n : verify::suite_names()) known = known || n == s;
    if (!known)
      throw CLI::ValidationError("--suite", "unknown suite '" + s + "'");
  }

  const Params params(a.alpha, a.dim, a.p);
  verify::Options opt;
  opt.f_shift = perturb_f;

  io::RunManifest m = make_manifest(
      "verify", a,
      {{"p", a.p}, {"suites", suites}, {"perturb_f", perturb_f}});
  const std::string base = out_base(a, "verify");

  bool all_pass = true;
  json jsuites = json::array();
  for (const auto& name : suites) {
    const verify::SuiteResult res = verify::run_suite(name, params, opt);
    json checks = json::array();
    for (const auto& c : res.checks) {
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"note", c.note}});
      std::printf("[%s] %s: %s (value %.6g, threshold %.6g)\n",
                  c.pass ? "PASS" : "FAIL", name.c_str(), c.name.c_str(),
                  c.value, c.threshold);
    }
    jsuites.push_back(
        {{"suite", name}, {"pass", res.pass()}, {"checks", checks}});
    all_pass = all_pass && res.pass();
  }
  io::write_summary_json(base + ".json", m,
                         json{{"pass", all_pass}, {"suites", jsuites}});
  std::printf("verify: %s (report %s.json)\n",
              all_pass ? "all suites passed" : "FAILURES detected",
              base.c_str());
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial steady states of the van der Waals thin-film "
               "equation: smooth and rupture profiles, boundary-value "
               "menus, verification suites"};
  app.require_subcommand(1);

  CommonArgs sa, ra, ba, va;
  double eta = 2.0;
  int k_smooth = 0, k_rup = 50;
  double rmax_smooth = 0.0, rmax_rup = 0.0;

  CLI::App* smooth = app.add_subcommand("smooth", "smooth radial solution");
  add_common(smooth, sa);
  smooth->add_option("--eta", eta, "center height h(0)")->required();
  smooth->add_option("--k", k_smooth, "number of critical radii to find");
  smooth->add_option("--rmax", rmax_smooth, "integration horizon");

  CLI::App* rupture =
      app.add_subcommand("rupture", "unique radial rupture solution");
  add_common(rupture, ra);
  rupture->add_option("--k", k_rup, "number of critical radii to find");
  rupture->add_option("--rmax", rmax_rup, "integration horizon");

  CLI::App* bvp = app.add_subcommand(
      "bvp", "prescribed-pressure / prescribed-volume solution menus");
  std::string mode = "pressure";
  double radius = 1.0, hbar_target = 0.5;
  int k_max = 3, eta_points = 28;
  add_common(bvp, ba);
  bvp->add_option("--mode", mode, "pressure | volume")
      ->check(CLI::IsMember({"pressure", "volume"}));
  bvp->add_option("--radius", radius, "domain radius R (pressure mode)");
  bvp->add_option("--hbar", hbar_target,
                  "prescribed average thickness (volume mode)");
  bvp->add_option("--kmax", k_max, "largest solution index to search");
  bvp->add_option("--eta-points", eta_points, "grid points above xi");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run invariant verification suites");
  std::vector<std::string> suites;
  double perturb_f = 0.0;
  add_common(verify_cmd, va);
  verify_cmd->add_option(
      "--suite", suites,
      "energies|oscillation|scaling|rupture|asymptotics|all (repeatable)");
  verify_cmd->add_option(
      "--perturb-f", perturb_f,
      "fault-injection hook: constant added to f (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (smooth->parsed()) {
      if (k_smooth <= 0 && rmax_smooth <= 0.0) k_smooth = 10;
      return cmd_smooth(sa, eta, k_smooth, rmax_smooth);
    }
    if (rupture->parsed()) return cmd_rupture(ra, k_rup, rmax_rup);
    if (bvp->parsed())
      return mode == "pressure"
                 ? cmd_bvp_pressure(ba, radius, k_max, eta_points)
                 : cmd_bvp_volume(ba, hbar_target, k_max);
    if (verify_cmd->parsed()) return cmd_verify(va, suites, perturb_f);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const thinfilm::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
