#include "thinfilm/rupture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "thinfilm/detail/dopri5.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/radial.hpp"

namespace thinfilm {

using detail::DenseCoef;
using detail::StepControl;
using detail::Vec2;
using cdouble = std::complex<double>;

namespace {

cdouble cpow(double x, cdouble mu) { return std::exp(mu * std::log(x)); }

}  // namespace

RuptureLocal picard_local(const Params& params, const DerivedConstants& cons,
                          double delta, double tol, int max_iter,
                          int nodes_per_decade) {
  if (!(delta > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("picard_local: delta and tol must be > 0");
  constexpr int kDecades = 8;
  const int n = kDecades * nodes_per_decade + 1;

  RuptureLocal out;
  out.delta = delta;
  out.r.resize(n);
  out.psi.assign(n, 0.0);
  for (int j = 0; j < n; ++j)
    out.r[j] = delta * std::pow(10.0, -static_cast<double>(n - 1 - j) /
                                          nodes_per_decade);

  const cdouble a1 = cons.a1, a2 = cons.a2;
  const double beta = cons.beta;
  const cdouble denom = (a1 + beta) * (a2 + beta);
  const cdouble mu_in = a2 - 1.0;         // inner weight t^{a2-1}
  const cdouble mu_out = a1 - a2 - 1.0;   // outer weight s^{a1-a2-1}

  // grid powers, computed once
  std::vector<double> forcing(n);
  std::vector<cdouble> pow_in1(n), pow_in2(n), pow_out1(n), pow_out2(n),
      pow_neg_a1(n);
  for (int j = 0; j < n; ++j) {
    const double r = out.r[j];
    forcing[j] = -std::real(cons.cap_c / denom) * std::pow(r, beta);
    pow_in1[j] = cpow(r, mu_in + 1.0);
    pow_in2[j] = cpow(r, mu_in + 2.0);
    pow_out1[j] = cpow(r, mu_out + 1.0);
    pow_out2[j] = cpow(r, mu_out + 2.0);
    pow_neg_a1[j] = cpow(r, -a1);
  }
  const bool out_m1_log = std::abs(mu_out + 1.0) < 1e-12;

  std::vector<double> w(n), next(n);
  std::vector<cdouble> inner(n), outer(n);
  double prev_update = 0.0;

  for (int it = 1; it <= max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      if (out.psi[j] <= -1.0)
        throw NoContraction(
            "picard_local: iterate left the positivity region phi > 0");
      w[j] = g_tilde_eval(params, out.psi[j]);
    }

    // inner integral I(s) = int_0^s t^{a2-1} g~(psi) dt; the head cell
    // assumes the leading power behavior g~ ~ (t/r0)^{2 beta}
    inner[0] = w[0] * pow_in1[0] / (a2 + 2.0 * beta);
    for (int j = 0; j + 1 < n; ++j) {
      const double x0 = out.r[j], x1 = out.r[j + 1];
      const cdouble B = (w[j + 1] - w[j]) / (x1 - x0);
      const cdouble A = w[j] - B * x0;
      const cdouble t1 = A * (pow_in1[j + 1] - pow_in1[j]) / (mu_in + 1.0);
      const cdouble t2 = B * (pow_in2[j + 1] - pow_in2[j]) / (mu_in + 2.0);
      inner[j + 1] = inner[j] + t1 + t2;
    }

    // outer integral J(r) = int_0^r s^{a1-a2-1} I(s) ds; head cell uses
    // I ~ (s/r0)^{a2 + 2 beta}
    outer[0] = inner[0] * cpow(out.r[0], a1 - a2) / (a1 + 2.0 * beta);
    for (int j = 0; j + 1 < n; ++j) {
      const double x0 = out.r[j], x1 = out.r[j + 1];
      const cdouble B = (inner[j + 1] - inner[j]) / (x1 - x0);
      const cdouble A = inner[j] - B * x0;
      cdouble t1;
      if (out_m1_log)
        t1 = A * std::log(x1 / x0);
      else
        t1 = A * (pow_out1[j + 1] - pow_out1[j]) / (mu_out + 1.0);
      const cdouble t2 = B * (pow_out2[j + 1] - pow_out2[j]) / (mu_out + 2.0);
      outer[j + 1] = outer[j] + t1 + t2;
    }

    double update = 0.0, sup = 0.0;
    for (int j = 0; j < n; ++j) {
      const cdouble tail = pow_neg_a1[j] * outer[j];
      out.max_imag = std::max(out.max_imag, std::abs(std::imag(tail)));
      next[j] = forcing[j] - std::real(tail);
      update = std::max(update, std::abs(next[j] - out.psi[j]));
      sup = std::max(sup, std::abs(next[j]));
    }
    out.psi.swap(next);
    out.iterations = it;
    out.residual = update;
    if (sup > delta)
      throw NoContraction(
          "picard_local: iterate left the ball |psi| <= delta (delta = " +
          std::to_string(delta) + ")");
    if (it >= 2) {
      if (prev_update > 0.0) out.contraction_ratio = update / prev_update;
      if (update > prev_update && update > 16.0 * tol)
        throw NoContraction(
            "picard_local: update norm grew; delta too large");
    }
    if (update <= tol) return out;
    prev_update = update;
  }
  throw MaxIterExceeded("picard_local: no convergence in " +
                        std::to_string(max_iter) + " iterations");
}

NormalizedState rupture_tail_start(const Params& params,
                                   const DerivedConstants& cons,
                                   double t_big) {
  (void)params;
  const double denom =
      cons.beta * cons.beta + cons.cap_a * cons.beta + cons.g_prime_1;
  const double kappa = -cons.cap_c / denom;
  const double decay = std::exp(-cons.beta * t_big);
  return {t_big, 1.0 + kappa * decay, -cons.beta * kappa * decay};
}

NormalizedRun integrate_normalized_backward(
    const Params& params, const NormalizedState& start, double t_end,
    const SolveConfig& config, std::optional<double> forcing_override) {
  if (!(t_end < start.t))
    throw std::invalid_argument(
        "integrate_normalized_backward: t_end must be < start.t");
  const DerivedConstants cons = derive_constants(params);
  const double C = forcing_override.value_or(cons.cap_c);
  const double A = cons.cap_a;
  const double beta = cons.beta;
  const double coeff = 2.0 / (params.alpha + 1.0) *
                       (params.dim - 2.0 + 2.0 / (params.alpha + 1.0));
  const double alpha = params.alpha;

  auto rhs = [&](double t, const Vec2& y, Vec2& dy) {
    dy[0] = y[1];
    const double g = coeff * (y[0] - std::pow(y[0], -alpha));
    dy[1] = A * y[1] - g - C * std::exp(-beta * t);
  };

  NormalizedRun run;
  run.t_start_ = start.t;
  run.t_end_ = t_end;
  run.states_.push_back(start);

  auto on_step = [&](const DenseCoef& dc, double t1, const Vec2& y1)
      -> StepControl {
    for (int j = 1; j <= 4; ++j) {
      const auto y = dc.eval(j / 4.0);
      if (!(y[0] > 0.0)) throw PositivityBreach(dc.x0 + j / 4.0 * dc.h, y[0]);
    }
    NormalizedRun::Seg seg;
    seg.x0 = dc.x0;
    seg.h = dc.h;
    seg.c1 = dc.c1;
    seg.c2 = dc.c2;
    seg.c3 = dc.c3;
    seg.c4 = dc.c4;
    seg.c5 = dc.c5;
    run.segs_.push_back(seg);
    run.states_.push_back({t1, y1[0], y1[1]});
    return StepControl::kContinue;
  };

  detail::dopri5(rhs, start.t, Vec2{start.phi, start.dphi}, t_end,
                 config.rel_tol, config.abs_tol, on_step);
  return run;
}

NormalizedState NormalizedRun::at(double t) const {
  if (segs_.empty())
    throw OutOfRange("NormalizedRun::at: empty run");
  const double slack = 1e-12 * std::max(1.0, std::abs(t_start_));
  if (t > t_start_ + slack || t < t_end_ - slack)
    throw OutOfRange("NormalizedRun::at: t outside [" +
                     std::to_string(t_end_) + ", " + std::to_string(t_start_) +
                     "]");
  t = std::clamp(t, t_end_, t_start_);
  // segments ordered by decreasing x0; find the one with t in [x0+h, x0]
  auto it = std::lower_bound(
      segs_.begin(), segs_.end(), t,
      [](const Seg& s, double tt) { return s.x0 + s.h > tt; });
  if (it == segs_.end()) --it;
  const Seg& s = *it;
  double theta = (t - s.x0) / s.h;
  theta = std::clamp(theta, 0.0, 1.0);
  const double th1 = 1.0 - theta;
  double y[2];
  for (int i = 0; i < 2; ++i)
    y[i] = s.c1[i] +
           theta * (s.c2[i] + th1 * (s.c3[i] + theta * (s.c4[i] + th1 * s.c5[i])));
  return {t, y[0], y[1]};
}

namespace {

State normalized_to_state(const Params& params, double c_star, double r,
                          double phi, double dphi) {
  const double e = 2.0 / (params.alpha + 1.0);
  const double re = std::pow(r, e);
  return {r, c_star * phi * re, c_star * re / r * (e * phi - dphi)};
}

}  // namespace

Trajectory assemble_rupture_trajectory(const Params& params,
                                       const NormalizedRun& run,
                                       const SolveConfig& config) {
  const DerivedConstants cons = derive_constants(params);
  const double denom =
      cons.beta * cons.beta + cons.cap_a * cons.beta + cons.g_prime_1;
  const double kappa = -cons.cap_c / denom;
  const double r_min = std::exp(-run.t_start());
  const double delta = std::exp(-run.t_end());
  if (!(config.r_max > delta))
    throw std::invalid_argument(
        "assemble_rupture_trajectory: r_max must exceed delta");

  TrajectoryBuilder b(params, SolutionKind::kRupture, 0.0);
  b.set_rupture_asymptote(cons.c_star, kappa);

  Trajectory::Segment asym;
  asym.form = Trajectory::Segment::Form::kAsymptote;
  asym.r0 = 0.0;
  asym.r1 = r_min;
  asym.a = cons.c_star;
  asym.b = kappa;
  b.add_segment(asym);

  const double cap = detail_config::sample_cap_of(params, config);
  const NormalizedState s0 = run.states().front();
  b.add_sample(normalized_to_state(params, cons.c_star, r_min, s0.phi,
                                   s0.dphi));

  auto eval_seg = [&](const NormalizedRun::Seg& s, double r) -> State {
    const double t = -std::log(r);
    double theta = std::clamp((t - s.x0) / s.h, 0.0, 1.0);
    const double th1 = 1.0 - theta;
    double y[2];
    for (int i = 0; i < 2; ++i)
      y[i] = s.c1[i] + theta * (s.c2[i] +
                                th1 * (s.c3[i] + theta * (s.c4[i] + th1 * s.c5[i])));
    return normalized_to_state(params, cons.c_star, r, y[0], y[1]);
  };

  double prev_sign = 0.0;
  for (const auto& s : run.segments()) {
    Trajectory::Segment seg;
    seg.form = Trajectory::Segment::Form::kNormalized;
    seg.r0 = std::exp(-s.x0);
    seg.r1 = std::exp(-(s.x0 + s.h));
    seg.x0 = s.x0;
    seg.h = s.h;
    seg.c1 = s.c1;
    seg.c2 = s.c2;
    seg.c3 = s.c3;
    seg.c4 = s.c4;
    seg.c5 = s.c5;
    b.add_segment(seg);

    double last_r = b.samples().back().r;
    while (seg.r1 - last_r > cap) {
      last_r += cap;
      b.add_sample(eval_seg(s, last_r));
    }
    const State end_state = eval_seg(s, seg.r1);
    b.add_sample(end_state);

    // defensive event scan (analytically h' > 0 throughout (0, delta])
    if (prev_sign != 0.0 && end_state.dh != 0.0 &&
        (end_state.dh > 0.0) != (prev_sign > 0.0)) {
      double lo = seg.r0, hi = seg.r1;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = eval_seg(s, mid).dh;
        if ((v > 0.0) == (prev_sign > 0.0))
          lo = mid;
        else
          hi = mid;
        if (hi - lo < config.event_refine_tol * std::max(1.0, hi)) break;
      }
      b.add_event(0.5 * (lo + hi));
    }
    if (end_state.dh != 0.0) prev_sign = end_state.dh;
  }

  const NormalizedState sd = run.at(run.t_end());
  const State at_delta =
      normalized_to_state(params, cons.c_star, delta, sd.phi, sd.dphi);
  detail_radial::append_radial_run(b, params, at_delta, config);
  return b.take();
}

Trajectory assemble_rupture_trajectory(const Params& params,
                                       const RuptureLocal& local,
                                       const SolveConfig& config) {
  // Finite-difference slopes on the Picard grid; kept for cross-checks.
  const DerivedConstants cons = derive_constants(params);
  const double denom =
      cons.beta * cons.beta + cons.cap_a * cons.beta + cons.g_prime_1;
  const double kappa = -cons.cap_c / denom;
  const int n = static_cast<int>(local.r.size());
  if (n < 3)
    throw std::invalid_argument("assemble_rupture_trajectory: grid too small");

  TrajectoryBuilder b(params, SolutionKind::kRupture, 0.0);
  b.set_rupture_asymptote(cons.c_star, kappa);

  Trajectory::Segment asym;
  asym.form = Trajectory::Segment::Form::kAsymptote;
  asym.r0 = 0.0;
  asym.r1 = local.r.front();
  asym.a = cons.c_star;
  asym.b = kappa;
  b.add_segment(asym);

  const double e = 2.0 / (params.alpha + 1.0);
  auto to_state = [&](int j, double dpsi) -> State {
    const double r = local.r[j];
    const double phi = 1.0 + local.psi[j];
    const double re = std::pow(r, e);
    // h' = c*(phi' r^e + e phi r^{e-1}), phi'(r) = dpsi
    return {r, cons.c_star * phi * re,
            cons.c_star * (dpsi * re + e * phi * re / r)};
  };
  auto slope = [&](int j) {
    const int j0 = std::max(0, j - 1), j1 = std::min(n - 1, j + 1);
    return (local.psi[j1] - local.psi[j0]) / (local.r[j1] - local.r[j0]);
  };

  // cubic Hermite pieces between grid nodes, represented through the dense
  // form: reuse kDopri coefficients (contd5 with c5 = 0 gives a cubic)
  State prev = to_state(0, slope(0));
  b.add_sample(prev);
  for (int j = 0; j + 1 < n; ++j) {
    const State s0 = to_state(j, slope(j));
    const State s1 = to_state(j + 1, slope(j + 1));
    Trajectory::Segment seg;
    seg.form = Trajectory::Segment::Form::kDopri;
    seg.r0 = s0.r;
    seg.r1 = s1.r;
    seg.x0 = s0.r;
    seg.h = s1.r - s0.r;
    // contd5(theta) with c5 = 0: c1 + th(c2 + (1-th)(c3 + th c4)) is the
    // standard Hermite cubic when c2 = y1-y0, c3 = h y0' - c2,
    // c4 = c2 - h y1' - c3
    const double y0[2] = {s0.h, s0.dh}, y1[2] = {s1.h, s1.dh};
    // derivative of dh across the cell, for the second component
    const double dh_slope = (s1.dh - s0.dh) / seg.h;
    const double d0[2] = {s0.dh, dh_slope}, d1[2] = {s1.dh, dh_slope};
    for (int i = 0; i < 2; ++i) {
      const double ydiff = y1[i] - y0[i];
      const double bspl = seg.h * d0[i] - ydiff;
      seg.c1[i] = y0[i];
      seg.c2[i] = ydiff;
      seg.c3[i] = bspl;
      seg.c4[i] = ydiff - seg.h * d1[i] - bspl;
      seg.c5[i] = 0.0;
    }
    b.add_segment(seg);
    b.add_sample(s1);
  }

  const State at_delta = to_state(n - 1, slope(n - 1));
  detail_radial::append_radial_run(b, params, at_delta, config);
  return b.take();
}

NormalizedEnergySeries normalized_energy_series(const NormalizedRun& run,
                                                const Params& params) {
  const DerivedConstants cons = derive_constants(params);
  NormalizedEnergySeries out;
  auto energy = [&](const NormalizedState& s) {
    return 0.5 * s.dphi * s.dphi + G_eval(params, s.phi);
  };
  for (const auto& s : run.states()) out.samples.emplace_back(s.t, energy(s));

  // identity check d(energy)/dt = A phi_t^2 - C e^{-beta t} phi_t on a
  // refined subdivision of every accepted step
  for (const auto& seg : run.segments()) {
    constexpr int m = 16;
    for (int i = 0; i < m; ++i) {
      const double ta = seg.x0 + seg.h * i / m;
      const double tb = seg.x0 + seg.h * (i + 1) / m;
      const NormalizedState sa = run.at(ta);
      const NormalizedState sb = run.at(tb);
      const NormalizedState sm = run.at(0.5 * (ta + tb));
      const double lhs = (energy(sb) - energy(sa)) / (tb - ta);
      const double rhs = cons.cap_a * sm.dphi * sm.dphi -
                         cons.cap_c * std::exp(-cons.beta * sm.t) * sm.dphi;
      out.max_identity_residual =
          std::max(out.max_identity_residual, std::abs(lhs - rhs));
    }
  }
  return out;
}

Trajectory solve_rupture(const Params& params, SolveConfig config,
                         int k_target, RuptureReport* report) {
  const DerivedConstants cons = derive_constants(params);
  const double length_scale = cons.spacing_limit / 3.14159265358979323846;

  // delta halving until the Picard iteration demonstrably contracts
  double delta = 0.1 * length_scale;
  RuptureLocal local;
  bool have_local = false;
  for (int attempt = 0; attempt < 12 && !have_local; ++attempt) {
    try {
      local = picard_local(params, cons, delta, 1e-12, 200);
      if (local.contraction_ratio < 0.5 || local.iterations <= 2)
        have_local = true;
      else
        delta *= 0.5;
    } catch (const NoContraction&) {
      delta *= 0.5;
    } catch (const MaxIterExceeded&) {
      delta *= 0.5;
    }
  }
  if (!have_local)
    throw NoContraction("solve_rupture: Picard iteration failed to contract "
                        "down to delta = " +
                        std::to_string(delta));

  const double t_end = -std::log(delta);
  double t_big = std::log(std::max(cons.cap_c, 1e-30) / 1e-12) / cons.beta;
  t_big = std::max(t_big, -std::log(1e-7 * length_scale));
  t_big = std::max(t_big, t_end + 5.0);

  const NormalizedState start = rupture_tail_start(params, cons, t_big);
  const NormalizedRun run =
      integrate_normalized_backward(params, start, t_end, config);

  // cross-validation of the two constructions on the Picard grid
  const double denom =
      cons.beta * cons.beta + cons.cap_a * cons.beta + cons.g_prime_1;
  const double kappa = -cons.cap_c / denom;
  const double r_min = std::exp(-t_big);
  double sup_diff = 0.0;
  for (std::size_t j = 0; j < local.r.size(); ++j) {
    const double r = local.r[j];
    const double phi_norm =
        (r >= r_min) ? run.at(-std::log(r)).phi
                     : 1.0 + kappa * std::pow(r, cons.beta);
    sup_diff = std::max(sup_diff, std::abs(1.0 + local.psi[j] - phi_norm));
  }

  if (report) {
    report->delta = delta;
    report->t_big = t_big;
    report->picard_iterations = local.iterations;
    report->picard_residual = local.residual;
    report->picard_contraction_ratio = local.contraction_ratio;
    report->cross_validation_sup_diff = sup_diff;
  }

  if (k_target <= 0) {
    if (!(config.r_max > delta))
      throw std::invalid_argument(
          "solve_rupture: either r_max (> delta) or k_target must be set");
    return assemble_rupture_trajectory(params, run, config);
  }

  config.max_events = k_target;
  double guess = (k_target + 3) * cons.spacing_limit;
  for (int attempt = 0; attempt < 12; ++attempt) {
    config.r_max = guess;
    Trajectory traj = assemble_rupture_trajectory(params, run, config);
    if (static_cast<int>(traj.events().size()) >= k_target) return traj;
    guess *= 1.6;
  }
  throw InsufficientRange("solve_rupture: could not reach " +
                          std::to_string(k_target) + " critical points");
}

}  // namespace thinfilm
