#include "thinfilm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "thinfilm/errors.hpp"

namespace thinfilm {

namespace {

bool is_flat(const Trajectory& traj) {
  if (traj.kind() != SolutionKind::kSmooth) return false;
  const double xi = derive_constants(traj.params()).xi;
  return std::abs(traj.eta() - xi) <= 1e-10 * xi;
}

// ---- quadrature ---------------------------------------------------------

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Integral over [a, b] with geometric subdivision toward a (for integrands
// whose derivatives blow up at the lower end, e.g. s^{-1/2} factors).
double integrate_geometric(const std::function<double(double)>& f, double a,
                           double b, double tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{b};
  double x = b;
  while (x > 2.0 * a && cuts.size() < 80) {
    x *= 0.5;
    if (x <= a) break;
    cuts.push_back(x);
  }
  cuts.push_back(a);
  std::reverse(cuts.begin(), cuts.end());
  double total = 0.0;
  const double piece_tol = tol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], piece_tol);
  return total;
}

}  // namespace

// ---- critical points ----------------------------------------------------

CriticalPoints critical_points(const Trajectory& traj, int k_max) {
  CriticalPoints cp;
  if (is_flat(traj)) return cp;
  const auto& ev = traj.events();
  if (static_cast<int>(ev.size()) < k_max)
    throw InsufficientRange(
        "critical_points: found " + std::to_string(ev.size()) +
        " events before r_max, needed " + std::to_string(k_max));

  const DerivedConstants cons = derive_constants(traj.params());
  for (int k = 0; k < k_max; ++k) {
    cp.radii.push_back(ev[k]);
    cp.heights.push_back(traj.evaluate_at(ev[k]).h);
    if (k > 0) cp.spacings.push_back(ev[k] - ev[k - 1]);
  }

  const double slack = 1e-12 * cons.xi;
  for (int k = 0; k + 1 < k_max; ++k) {
    const double d0 = cp.heights[k] - cons.xi;
    const double d1 = cp.heights[k + 1] - cons.xi;
    if (!(d0 * d1 < 0.0))
      cp.violations.push_back("alternation failed between r_" +
                              std::to_string(k + 1) + " and r_" +
                              std::to_string(k + 2));
    const double F0 = F_eval(traj.params(), cp.heights[k]);
    const double F1 = F_eval(traj.params(), cp.heights[k + 1]);
    if (!(F1 < F0 + slack))
      cp.violations.push_back("F(h(r_k)) not decreasing at k = " +
                              std::to_string(k + 2));
  }
  for (int k = 0; k + 2 < k_max; ++k) {
    const double d0 = std::abs(cp.heights[k] - cons.xi);
    const double d2 = std::abs(cp.heights[k + 2] - cons.xi);
    if (d2 > d0 + slack)
      cp.violations.push_back(
          "|h(r_k) - xi| grew within parity class at k = " +
          std::to_string(k + 3));
  }
  return cp;
}

SpacingDiagnostics spacing_diagnostics(const CriticalPoints& cp,
                                       const DerivedConstants& constants) {
  const int n = static_cast<int>(cp.spacings.size());
  if (n < 10)
    throw InsufficientRange("spacing_diagnostics: need >= 10 spacings, have " +
                            std::to_string(n));
  SpacingDiagnostics d{};
  d.tail_count = std::max(1, n / 4);
  double sum = 0.0;
  d.tail_min = cp.spacings[n - d.tail_count];
  d.tail_max = d.tail_min;
  for (int i = n - d.tail_count; i < n; ++i) {
    sum += cp.spacings[i];
    d.tail_min = std::min(d.tail_min, cp.spacings[i]);
    d.tail_max = std::max(d.tail_max, cp.spacings[i]);
  }
  d.tail_mean = sum / d.tail_count;
  d.limit = constants.spacing_limit;
  d.deviation = std::abs(d.tail_mean - d.limit) / d.limit;
  return d;
}

// ---- energies -----------------------------------------------------------

EnergySeries energy_series(const Trajectory& traj) {
  EnergySeries es;
  const auto& samples = traj.samples();
  es.r.reserve(samples.size());
  es.e1.reserve(samples.size());
  es.e2.reserve(samples.size());
  const double two_nm1 = 2.0 * (traj.params().dim - 1);
  for (const State& s : samples) {
    if (!(s.h > 0.0)) continue;
    const double e1 = 0.5 * s.dh * s.dh + F_eval(traj.params(), s.h);
    es.r.push_back(s.r);
    es.e1.push_back(e1);
    es.e2.push_back(std::pow(s.r, two_nm1) * e1);
  }
  return es;
}

MonotonicityReport check_energy_monotonicity(const EnergySeries& es,
                                             double tol) {
  MonotonicityReport rep;
  rep.tol = tol;
  for (std::size_t i = 0; i + 1 < es.r.size(); ++i) {
    const double s1 = std::max(std::abs(es.e1[i]), std::abs(es.e1[i + 1]));
    const double up = es.e1[i + 1] - es.e1[i];
    if (up > tol * s1)
      rep.e1_violations.push_back({es.r[i], es.r[i + 1], up});
    const double s2 = std::max(std::abs(es.e2[i]), std::abs(es.e2[i + 1]));
    const double down = es.e2[i] - es.e2[i + 1];
    if (down > tol * s2)
      rep.e2_violations.push_back({es.r[i], es.r[i + 1], down});
  }
  return rep;
}

// ---- r1 bound -----------------------------------------------------------

double r1_lower_bound(const Params& params, double eta) {
  if (!(eta > 0.0))
    throw std::domain_error("r1_lower_bound: eta must be > 0");
  const double xi = derive_constants(params).xi;
  if (eta == xi)
    throw std::domain_error("r1_lower_bound: eta == xi (flat solution)");
  const double a = params.alpha;
  const double two_na = 2.0 * params.dim * a;
  const double rel = (eta - xi) / xi;
  if (std::abs(rel) < 1e-7) {
    // eta -> xi limit of (eta-xi)/(xi^-a - eta^-a) with first correction
    const double ratio =
        std::pow(xi, a + 1.0) / a * (1.0 + 0.5 * (a + 1.0) * rel);
    return std::sqrt(two_na * ratio);
  }
  const double ratio =
      (eta - xi) / (std::pow(xi, -a) - std::pow(eta, -a));
  return std::sqrt(two_na * ratio);
}

// ---- rupture growth -----------------------------------------------------

GrowthBoundsReport growth_bounds_check(const Trajectory& traj,
                                       const Params& params) {
  if (traj.kind() != SolutionKind::kRupture)
    throw std::invalid_argument(
        "growth_bounds_check: requires a rupture trajectory");
  const DerivedConstants cons = derive_constants(params);
  const double a = params.alpha;
  const double e = 2.0 / (a + 1.0);

  GrowthBoundsReport rep{};
  rep.lower_constant =
      std::pow((a + 1.0) / (4.0 * params.dim * a), 1.0 / (a + 1.0));

  // region where f(h) <= -h^{-a}/(2a), i.e. h <= xi 2^{-1/a}
  const double h_region = cons.xi * std::pow(2.0, -1.0 / a);
  rep.region_end = traj.samples().front().r;
  rep.lower_bound_ok = true;
  for (const State& s : traj.samples()) {
    if (s.h > h_region) break;
    rep.region_end = s.r;
    if (s.h < rep.lower_constant * std::pow(s.r, e) * (1.0 - 1e-12))
      rep.lower_bound_ok = false;
  }

  rep.c2_fit = 0.0;
  for (const State& s : traj.samples())
    if (s.r > 0.0)
      rep.c2_fit = std::max(rep.c2_fit, s.h / std::pow(s.r, e));

  // log-log slope over the fit window
  const double length_scale = cons.spacing_limit / 3.14159265358979323846;
  rep.slope_window_lo = 1e-6 * length_scale;
  rep.slope_window_hi = 1e-4 * length_scale;
  const int n_fit = 40;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n_fit; ++i) {
    const double t = static_cast<double>(i) / (n_fit - 1);
    const double r = rep.slope_window_lo *
                     std::pow(rep.slope_window_hi / rep.slope_window_lo, t);
    const double x = std::log(r);
    const double y = std::log(traj.evaluate_at(r).h);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (n_fit * sxy - sx * sy) / (n_fit * sxx - sx * sx);

  const State s0 = traj.samples().front();
  rep.c_star_ratio = s0.h / std::pow(s0.r, e);
  return rep;
}

// ---- average thickness --------------------------------------------------

namespace {

// analytic integral of h(s) s^{N-1} over [0, r_lo] from the rupture
// asymptote h = c* s^e (1 + kappa s^beta)
double rupture_origin_piece(const Trajectory& traj, const Params& params,
                            double r_lo) {
  const double a = params.alpha;
  const double e = 2.0 / (a + 1.0);
  const double beta = 2.0 * a / (a + 1.0);
  const double N = params.dim;
  const double cs = traj.rupture_c_star();
  const double kap = traj.rupture_kappa();
  return cs * (std::pow(r_lo, N + e) / (N + e) +
               kap * std::pow(r_lo, N + e + beta) / (N + e + beta));
}

double integral_h_weighted(const Trajectory& traj, const Params& params,
                           double lo, double hi, double tol) {
  const double nm1 = params.dim - 1;
  auto f = [&](double s) {
    return traj.evaluate_at(s).h * std::pow(s, nm1);
  };
  if (traj.kind() == SolutionKind::kRupture)
    return integrate_geometric(f, lo, hi, tol);
  return adaptive_simpson(f, lo, hi, tol);
}

}  // namespace

double average_thickness(const Trajectory& traj, double R,
                         const Params& params) {
  const double hi_lim = traj.r_back();
  if (!(R > 0.0) || R > hi_lim * (1.0 + 1e-9))
    throw OutOfRange("average_thickness: R outside trajectory range");
  R = std::min(R, hi_lim);

  double lo = 0.0;
  double integral = 0.0;
  if (traj.kind() == SolutionKind::kRupture) {
    lo = traj.samples().front().r;
    integral += rupture_origin_piece(traj, params, lo);
  }
  const double tol = 1e-11 * std::max(1.0, std::pow(R, params.dim));
  integral += integral_h_weighted(traj, params, lo, R, tol);
  return params.dim / std::pow(R, params.dim) * integral;
}

std::vector<double> average_thickness_cumulative(
    const Trajectory& traj, const std::vector<double>& radii,
    const Params& params) {
  std::vector<double> out;
  out.reserve(radii.size());
  double prev_r = 0.0;
  double integral = 0.0;
  if (traj.kind() == SolutionKind::kRupture) {
    prev_r = traj.samples().front().r;
    integral = rupture_origin_piece(traj, params, prev_r);
  }
  for (double R : radii) {
    if (!(R >= prev_r) || R > traj.r_back() * (1.0 + 1e-9))
      throw OutOfRange("average_thickness_cumulative: radii must be "
                       "ascending within range");
    const double tol = 1e-11 * std::max(1.0, std::pow(R, params.dim));
    integral += integral_h_weighted(traj, params, prev_r, std::min(R, traj.r_back()), tol);
    prev_r = std::min(R, traj.r_back());
    out.push_back(params.dim / std::pow(R, params.dim) * integral);
  }
  return out;
}

// ---- weak form ----------------------------------------------------------

double BumpTestFunction::value(double r) const {
  const double u = (r - center) / width;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double BumpTestFunction::laplacian(double r, int dim) const {
  const double u = (r - center) / width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double q = 1.0 - u * u;
  const double B = std::exp(-1.0 / q);
  const double s = -2.0 * u / (q * q);                 // B'/B
  const double sp = -2.0 * (1.0 + 3.0 * u * u) / (q * q * q);
  const double d2 = B * (s * s + sp);                  // B''
  double lap = d2 / (width * width);
  if (center == 0.0) {
    // (N-1)/r * B'(u)/w with B'(u)/u = -2B/q^2: no 0/0 at the origin
    lap += (dim - 1) * (-2.0 * B / (q * q)) / (width * width);
  } else {
    lap += (dim - 1) / r * (B * s) / width;
  }
  return lap;
}

double BumpTestFunction::support_lo() const {
  return std::max(0.0, center - width);
}
double BumpTestFunction::support_hi() const { return center + width; }

double weak_form_residual(const Trajectory& traj, const BumpTestFunction& bump,
                          double quad_tol) {
  if (!(bump.width > 0.0))
    throw std::invalid_argument("weak_form_residual: width must be > 0");
  if (bump.center != 0.0 && bump.center < bump.width)
    throw std::invalid_argument(
        "weak_form_residual: bump must be centered at 0 or supported away "
        "from it");
  const Params& params = traj.params();
  const double hi = bump.support_hi();
  if (hi > traj.r_back() * (1.0 + 1e-9))
    throw OutOfRange("weak_form_residual: bump support exceeds trajectory");

  double lo = bump.support_lo();
  const double nm1 = params.dim - 1;
  const double a = params.alpha;

  double lhs = 0.0, rhs = 0.0;
  if (lo == 0.0 && traj.kind() == SolutionKind::kRupture) {
    const double r_lo = traj.samples().front().r;
    const double cs = traj.rupture_c_star();
    const double kap = traj.rupture_kappa();
    const double e = 2.0 / (a + 1.0);
    const double beta = 2.0 * a / (a + 1.0);
    const double N = params.dim;
    const double phi0 = bump.value(0.0);
    // lhs piece: h ~ c* s^e, lap(phi) ~ lap(phi)(0)
    lhs += bump.laplacian(0.0, params.dim) * cs *
           std::pow(r_lo, N + e) / (N + e);
    // rhs piece: (h^{-a}/a - p) phi, with (1 + kap s^beta)^{-a} ~ 1 - a kap s^beta
    const double nu = N - 2.0 * a / (a + 1.0);
    rhs += phi0 * (std::pow(cs, -a) / a *
                       (std::pow(r_lo, nu) / nu -
                        a * kap * std::pow(r_lo, nu + beta) / (nu + beta)) -
                   params.pressure * std::pow(r_lo, N) / N);
    lo = r_lo;
  }

  auto f_lhs = [&](double s) {
    return traj.evaluate_at(s).h * bump.laplacian(s, params.dim) *
           std::pow(s, nm1);
  };
  auto f_rhs = [&](double s) {
    const double h = traj.evaluate_at(s).h;
    return (std::pow(h, -a) / a - params.pressure) * bump.value(s) *
           std::pow(s, nm1);
  };
  if (traj.kind() == SolutionKind::kRupture && bump.support_lo() == 0.0) {
    lhs += integrate_geometric(f_lhs, lo, hi, quad_tol);
    rhs += integrate_geometric(f_rhs, lo, hi, quad_tol);
  } else {
    lhs += adaptive_simpson(f_lhs, lo, hi, quad_tol);
    rhs += adaptive_simpson(f_rhs, lo, hi, quad_tol);
  }
  return std::abs(lhs - rhs);
}

}  // namespace thinfilm
