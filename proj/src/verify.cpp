#include "thinfilm/verify.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "thinfilm/analysis.hpp"
#include "thinfilm/radial.hpp"
#include "thinfilm/rupture.hpp"
#include "thinfilm/scaling.hpp"

namespace thinfilm::verify {

namespace {

Params with_shift(Params p, double shift) {
  p.f_shift = shift;
  return p;
}

void add(SuiteResult& out, const std::string& name, double value,
         double threshold, bool pass, const std::string& note = "") {
  out.checks.push_back({name, pass, value, threshold, note});
}

void add_leq(SuiteResult& out, const std::string& name, double value,
             double threshold, const std::string& note = "") {
  add(out, name, value, threshold, value <= threshold, note);
}

// ---- energies -----------------------------------------------------------

SuiteResult suite_energies(const Params& base, const Options& opt) {
  SuiteResult out{"energies", {}};
  const double tol = 1e-8;

  struct Set {
    double alpha;
    int dim;
    double p;
  };
  const std::vector<Set> sets{{base.alpha, base.dim, base.pressure},
                              {3.0, 9, 0.5},  // real exponents
                              {2.5, 3, 1.0},
                              {5.0, 4, 0.2},
                              {1.5, 2, 2.0}};

  for (const Set& s : sets) {
    const Params params = with_shift(Params(s.alpha, s.dim, s.p), opt.f_shift);
    const DerivedConstants cons = derive_constants(params);
    SolveConfig cfg;
    Trajectory traj = solve_smooth(params, 1.6 * cons.xi, cfg, 12);
    const EnergySeries es = energy_series(traj);
    const MonotonicityReport rep = check_energy_monotonicity(es, tol);
    const std::string tag = "alpha=" + std::to_string(s.alpha) +
                            ",N=" + std::to_string(s.dim) +
                            ",p=" + std::to_string(s.p);
    add(out, "e1 nonincreasing [" + tag + "]",
        static_cast<double>(rep.e1_violations.size()), 0.0,
        rep.e1_violations.empty());
    add(out, "e2 nondecreasing [" + tag + "]",
        static_cast<double>(rep.e2_violations.size()), 0.0,
        rep.e2_violations.empty());

    // definition consistency e2 = r^{2(N-1)} e1 on a few samples
    double max_def = 0.0;
    for (std::size_t i = 0; i < es.r.size(); i += es.r.size() / 7 + 1) {
      if (es.r[i] <= 0.0) continue;
      const double expect = std::pow(es.r[i], 2.0 * (s.dim - 1)) * es.e1[i];
      max_def = std::max(max_def,
                         std::abs(es.e2[i] - expect) /
                             std::max(1e-300, std::abs(expect)));
    }
    add_leq(out, "e2/r^{2(N-1)} == e1 [" + tag + "]", max_def, 1e-12);
  }

  // rupture run on the base triple
  {
    const Params params = with_shift(base, opt.f_shift);
    SolveConfig cfg;
    Trajectory traj = solve_rupture(params, cfg, 12);
    const MonotonicityReport rep =
        check_energy_monotonicity(energy_series(traj), tol);
    add(out, "e1 nonincreasing [rupture base]",
        static_cast<double>(rep.e1_violations.size()), 0.0,
        rep.e1_violations.empty());
    add(out, "e2 nondecreasing [rupture base]",
        static_cast<double>(rep.e2_violations.size()), 0.0,
        rep.e2_violations.empty());

    // sandwich bound e1(r) <= (rbar/r)^{2(N-1)} e1(rbar) for r < rbar
    const EnergySeries es = energy_series(traj);
    double worst = 0.0;
    const std::size_t n = es.r.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 10);
    for (std::size_t ia = stride; ia < n; ia += stride) {
      const double rbar = es.r[ia], ebar = es.e1[ia];
      for (std::size_t i = ia / 2; i < ia; i += std::max<std::size_t>(1, ia / 16)) {
        if (es.r[i] <= 0.0) continue;
        const double bound =
            std::pow(rbar / es.r[i], 2.0 * (base.dim - 1)) * ebar;
        worst = std::max(worst, (es.e1[i] - bound) / std::max(1.0, bound));
      }
    }
    add_leq(out, "sandwich bound e1 <= (rbar/r)^{2(N-1)} e1(rbar)", worst,
            1e-8);
  }
  return out;
}

// ---- oscillation --------------------------------------------------------

void oscillation_checks(SuiteResult& out, const Trajectory& traj,
                        const Params& params, const std::string& tag) {
  const DerivedConstants cons = derive_constants(params);
  const CriticalPoints cp = critical_points(traj, 20);
  add(out, "alternation+F-decrease+parity [" + tag + "]",
      static_cast<double>(cp.violations.size()), 0.0, cp.violations.empty(),
      cp.violations.empty() ? "" : cp.violations.front());

  // h' keeps one sign between consecutive events
  bool one_sign = true;
  for (std::size_t k = 0; k + 1 < cp.radii.size(); ++k) {
    const double a = cp.radii[k], b = cp.radii[k + 1];
    double sign0 = 0.0;
    for (int j = 1; j < 12; ++j) {
      const double r = a + (b - a) * j / 12.0;
      const double dh = traj.evaluate_at(r).dh;
      if (dh == 0.0) continue;
      if (sign0 == 0.0)
        sign0 = dh;
      else if ((dh > 0.0) != (sign0 > 0.0))
        one_sign = false;
    }
  }
  add(out, "h' single-signed between events [" + tag + "]",
      one_sign ? 0.0 : 1.0, 0.0, one_sign);

  add(out, "h(r_1) on the far side of xi [" + tag + "]", cp.heights[0],
      cons.xi,
      traj.kind() == SolutionKind::kRupture
          ? cp.heights[0] > cons.xi   // rupture rises through xi first
          : (traj.eta() > cons.xi) == (cp.heights[0] < cons.xi));
}

SuiteResult suite_oscillation(const Params& base, const Options& opt) {
  SuiteResult out{"oscillation", {}};
  const Params params = with_shift(base, opt.f_shift);
  const DerivedConstants cons = derive_constants(params);
  SolveConfig cfg;
  Trajectory smooth = solve_smooth(params, 2.0 * cons.xi, cfg, 20);
  oscillation_checks(out, smooth, params, "smooth eta=2xi");
  Trajectory rupture = solve_rupture(params, cfg, 20);
  oscillation_checks(out, rupture, params, "rupture");
  return out;
}

// ---- scaling ------------------------------------------------------------

SuiteResult suite_scaling(const Params& base, const Options& opt) {
  SuiteResult out{"scaling", {}};
  const double a = base.alpha;
  const int dim = base.dim;
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  const Params canon = with_shift(Params(a, dim, 1.0 / a), opt.f_shift);
  for (int trial = 0; trial < 3; ++trial) {
    const double p = 0.1 + 2.9 * u(rng);
    const double ap = a * p;
    double eta_c = 1.3 + 2.0 * u(rng);
    const double eta = std::pow(ap, -1.0 / a) * eta_c;
    const Params target = with_shift(Params(a, dim, p), opt.f_shift);

    SolveConfig cfg;
    cfg.r_max = 25.0;
    Trajectory canonical = solve_smooth(canon, eta_c, cfg, 0);
    Trajectory scaled = scale_from_canonical(target, eta, canonical);
    SolveConfig dcfg;
    dcfg.r_max = scaled.r_back();
    Trajectory direct = solve_smooth(target, eta, dcfg, 0);

    double max_diff = 0.0;
    const double r_hi = 0.98 * std::min(scaled.r_back(), direct.r_back());
    for (int i = 1; i <= 100; ++i) {
      const double r = r_hi * i / 100.0;
      max_diff = std::max(max_diff, std::abs(scaled.evaluate_at(r).h -
                                             direct.evaluate_at(r).h));
    }
    add_leq(out,
            "direct vs scaled solve, p=" + std::to_string(p) +
                " eta=" + std::to_string(eta),
            max_diff, 1e-8);
  }

  // exponent identity: r_k^{p,eta} (alpha p)^{(1+alpha)/(2 alpha)} is
  // p-independent at fixed canonical height
  {
    const double eta_c = 2.0;
    std::vector<double> scaled_rk;
    for (double p : {0.5 / a, 1.0 / a, 2.0 / a}) {
      const Params target = with_shift(Params(a, dim, p), opt.f_shift);
      const double ap = a * p;
      const double eta = std::pow(ap, -1.0 / a) * eta_c;
      SolveConfig cfg;
      Trajectory traj = solve_smooth(target, eta, cfg, 3);
      scaled_rk.push_back(traj.events()[2] *
                          std::pow(ap, (1.0 + a) / (2.0 * a)));
    }
    double spread = 0.0;
    for (double v : scaled_rk)
      spread = std::max(spread, std::abs(v - scaled_rk[0]) / scaled_rk[0]);
    add_leq(out, "r_3 scaling identity across p-grid", spread, 1e-8);
  }

  // flat maps to flat
  {
    const double p = 2.0 / a;
    const Params target = with_shift(Params(a, dim, p), opt.f_shift);
    SolveConfig cfg;
    cfg.r_max = 10.0;
    Trajectory canonical = solve_smooth(canon, 1.0, cfg, 0);
    const double xi_t = derive_constants(target).xi;
    Trajectory scaled = scale_from_canonical(target, xi_t, canonical);
    double dev = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double r = scaled.r_back() * i / 20.0;
      dev = std::max(dev, std::abs(scaled.evaluate_at(r).h - xi_t) / xi_t);
    }
    add_leq(out, "flat solution maps to flat solution", dev, 1e-12);
  }
  return out;
}

// ---- rupture ------------------------------------------------------------

SuiteResult suite_rupture(const Params& base, const Options& opt) {
  SuiteResult out{"rupture", {}};
  const Params params = with_shift(base, opt.f_shift);
  SolveConfig cfg;
  RuptureReport rep;
  Trajectory traj = solve_rupture(params, cfg, 12, &rep);

  const GrowthBoundsReport gb = growth_bounds_check(traj, params);
  const double e = 2.0 / (params.alpha + 1.0);
  add_leq(out, "log-log slope near origin == 2/(alpha+1)",
          std::abs(gb.slope - e), 1e-3);
  const double c_star = derive_constants(params).c_star;
  add_leq(out, "h/r^{2/(alpha+1)} -> c* at the origin",
          std::abs(gb.c_star_ratio - c_star), 1e-3);
  add(out, "explicit lower growth constant respected", gb.lower_bound_ok,
      1.0, gb.lower_bound_ok,
      "constant = " + std::to_string(gb.lower_constant));
  add_leq(out, "Picard vs backward-normalized sup difference",
          rep.cross_validation_sup_diff, 1e-6);

  // r^{N-1} h' -> 0 as r -> 0+
  const double r0 = traj.samples().front().r;
  double prev = std::abs(std::pow(r0, params.dim - 1) * traj.evaluate_at(r0).dh);
  bool decreasing_to_zero = true;
  double v = prev;
  for (double r = r0; r > 1e-3 * r0; r *= 0.5) {
    v = std::abs(std::pow(r, params.dim - 1) * traj.evaluate_at(r).dh);
    if (v > prev * 1.0000001) decreasing_to_zero = false;
    prev = v;
  }
  add(out, "r^{N-1} h' -> 0 toward the origin", v, prev,
      decreasing_to_zero && v < 1e-3);

  const DerivedConstants cons = derive_constants(params);
  const double L = cons.spacing_limit / 3.14159265358979323846;
  const double residual =
      weak_form_residual(traj, BumpTestFunction{0.0, 0.8 * L}, 1e-9);
  add_leq(out, "weak-form residual, bump containing the rupture point",
          residual, 1e-6);
  return out;
}

// ---- asymptotics --------------------------------------------------------

SuiteResult suite_asymptotics(const Params& base, const Options& opt) {
  SuiteResult out{"asymptotics", {}};
  const Params params = with_shift(base, opt.f_shift);
  const DerivedConstants cons = derive_constants(params);
  SolveConfig cfg;

  Trajectory rupture = solve_rupture(params, cfg, 50);
  const CriticalPoints cp = critical_points(rupture, 50);
  const SpacingDiagnostics sd = spacing_diagnostics(cp, cons);
  add_leq(out, "spacing tail vs pi (alpha p)^{-(1+alpha)/(2alpha)}",
          sd.deviation, 0.01,
          "tail mean = " + std::to_string(sd.tail_mean));
  add_leq(out, "|h(r_50) - xi| / xi",
          std::abs(cp.heights[49] - cons.xi) / cons.xi, 0.02);

  bool parity_ok = true;
  for (std::size_t k = 4; k + 2 < cp.heights.size(); ++k) {
    if (std::abs(cp.heights[k + 2] - cons.xi) >
        std::abs(cp.heights[k] - cons.xi) + 1e-12)
      parity_ok = false;
  }
  add(out, "|h(r_k) - xi| nonincreasing per parity class (k >= 5)",
      parity_ok ? 0.0 : 1.0, 0.0, parity_ok);

  // prescribed-volume asymptotics at alpha = 3 (canonical pressure)
  if (std::abs(params.alpha - 3.0) < 1e-12 &&
      std::abs(params.alpha * params.pressure - 1.0) < 1e-9) {
    std::vector<double> radii{cp.radii[9], cp.radii[19], cp.radii[49]};
    std::vector<double> avg =
        average_thickness_cumulative(rupture, radii, params);
    const double e = 2.0 / (params.alpha + 1.0);
    std::vector<double> dev;
    const int ks[3] = {10, 20, 50};
    for (int i = 0; i < 3; ++i) {
      const double hbar = avg[i] * std::pow(radii[i], -e);
      dev.push_back(std::abs(std::sqrt(ks[i] * 3.14159265358979323846) * hbar -
                             1.0));
    }
    add_leq(out, "|sqrt(k pi) hbar_k - 1| at k = 50", dev[2], 0.05);
    add(out, "sqrt(k pi) hbar_k deviation decreasing over k in {10,20,50}",
        dev[2], dev[0], dev[0] > dev[1] && dev[1] > dev[2]);
  }

  // r1 lower bound across a 20-point grid on both sides of xi
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double eta = (i < 10)
                             ? cons.xi * (0.10 + 0.088 * i)
                             : cons.xi * (1.2 + 0.5 * (i - 10));
      SolveConfig c2;
      Trajectory traj = solve_smooth(params, eta, c2, 1);
      const double bound = r1_lower_bound(params, eta);
      const double margin = traj.events()[0] - bound;
      worst = std::min(worst, margin);
      if (margin < -1e-9) ok = false;
    }
    add(out, "measured r_1(eta) >= closed-form bound on 20-point grid",
        worst, 0.0, ok);
  }

  // infimum sweep: monotone R_k and p_k, growing r_1 tail
  {
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(1.05 * std::pow(30.0, i / 11.0));
    const InfR1Record rec =
        estimate_inf_r1(params.alpha, params.dim, grid, 4);
    bool mono = true;
    for (std::size_t k = 0; k + 1 < rec.R_k.size(); ++k)
      if (rec.R_k[k + 1] < rec.R_k[k] * (1.0 - 1e-12)) mono = false;
    add(out, "R_k nondecreasing in k", mono ? 0.0 : 1.0, 0.0, mono);
    bool pmono = true;
    for (std::size_t k = 0; k + 1 < rec.p_k.size(); ++k)
      if (rec.p_k[k + 1] < rec.p_k[k] * (1.0 - 1e-12)) pmono = false;
    add(out, "p_k nondecreasing in k", pmono ? 0.0 : 1.0, 0.0, pmono);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "energies", "oscillation", "scaling", "rupture", "asymptotics"};
  return names;
}

SuiteResult run_suite(const std::string& name, const Params& base,
                      const Options& opt) {
  if (name == "energies") return suite_energies(base, opt);
  if (name == "oscillation") return suite_oscillation(base, opt);
  if (name == "scaling") return suite_scaling(base, opt);
  if (name == "rupture") return suite_rupture(base, opt);
  if (name == "asymptotics") return suite_asymptotics(base, opt);
  throw std::invalid_argument("unknown verification suite: " + name);
}

}  // namespace thinfilm::verify
