#include "thinfilm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "thinfilm/analysis.hpp"
#include "thinfilm/detail/dopri5.hpp"
#include "thinfilm/errors.hpp"

namespace thinfilm {

using detail::DenseCoef;
using detail::StepControl;
using detail::Vec2;

namespace detail_config {

double h_floor_of(const Params& params, const SolveConfig& config) {
  if (config.h_floor > 0.0) return config.h_floor;
  return 1e-8 * std::pow(params.alpha * params.pressure, -1.0 / params.alpha);
}

double sample_cap_of(const Params& params, const SolveConfig& config) {
  if (config.max_sample_spacing > 0.0) return config.max_sample_spacing;
  return derive_constants(params).spacing_limit / 20.0;
}

}  // namespace detail_config

State taylor_start_smooth(const Params& params, double eta, double r0) {
  const double c2 = -f_eval(params, eta) / (2.0 * params.dim);
  return {r0, eta + c2 * r0 * r0, 2.0 * c2 * r0};
}

double smooth_start_radius(const Params& params, double eta, double abs_tol) {
  const double length_scale =
      std::pow(params.alpha * params.pressure,
               -(1.0 + params.alpha) / (2.0 * params.alpha));
  const double f = f_eval(params, eta);
  const double fp = std::pow(eta, -params.alpha - 1.0);
  const double c4 =
      fp * f / (2.0 * params.dim * (4.0 * params.dim + 8.0));
  double r0 = 1e-3 * length_scale;
  if (std::abs(c4) > 0.0)
    r0 = std::min(r0, std::pow(abs_tol / std::abs(c4), 0.25));
  return std::max(r0, 1e-9 * length_scale);
}

namespace {

struct RadialRhs {
  double n_minus_1;
  double alpha;
  double pressure;
  double shift;
  void operator()(double r, const Vec2& y, Vec2& dy) const {
    dy[0] = y[1];
    const double f = pressure - std::pow(y[0], -alpha) / alpha + shift;
    dy[1] = -n_minus_1 / r * y[1] - f;
  }
};

inline double dense_dh(const DenseCoef& dc, double theta) {
  return dc.eval(theta)[1];
}

// Bisection on the dense interpolant for the h' = 0 crossing bracketed by
// [th_a, th_b] (opposite signs).
double refine_event(const DenseCoef& dc, double th_a, double th_b,
                    double rel_tol) {
  double va = dense_dh(dc, th_a);
  for (int it = 0; it < 200; ++it) {
    const double ra = dc.x0 + th_a * dc.h;
    const double rb = dc.x0 + th_b * dc.h;
    if (std::abs(rb - ra) <= rel_tol * std::max(1.0, std::abs(rb))) break;
    const double tm = 0.5 * (th_a + th_b);
    const double vm = dense_dh(dc, tm);
    if (vm == 0.0) return dc.x0 + tm * dc.h;
    if ((va < 0.0) == (vm < 0.0)) {
      th_a = tm;
      va = vm;
    } else {
      th_b = tm;
    }
  }
  const double tm = 0.5 * (th_a + th_b);
  return dc.x0 + tm * dc.h;
}

}  // namespace

namespace detail_radial {

void append_radial_run(TrajectoryBuilder& b, const Params& params,
                       const State& start, const SolveConfig& config) {
  if (!(start.h > 0.0))
    throw std::invalid_argument("integrate: start.h must be > 0");
  if (!(start.r > 0.0))
    throw std::invalid_argument(
        "integrate: start.r must be > 0 (smooth starts go through "
        "taylor_start_smooth)");
  if (!(config.r_max > start.r))
    throw std::invalid_argument("integrate: r_max must exceed start.r");

  const double floor = detail_config::h_floor_of(params, config);
  const double cap = detail_config::sample_cap_of(params, config);
  const RadialRhs rhs{static_cast<double>(params.dim - 1), params.alpha,
                      params.pressure, params.f_shift};

  b.add_sample({start.r, start.h, start.dh});

  int prev_sign = (start.dh > 0.0) ? 1 : (start.dh < 0.0 ? -1 : 0);
  int n_events = 0;
  constexpr int kScan = 8;

  auto on_step = [&](const DenseCoef& dc, double x1, const Vec2& y1)
      -> StepControl {
    // positivity + event scan over the dense output
    double prev_theta = 0.0;
    std::vector<double> step_events;
    for (int j = 1; j <= kScan; ++j) {
      const double theta = static_cast<double>(j) / kScan;
      const auto y = dc.eval(theta);
      if (y[0] < floor) throw PositivityBreach(dc.x0 + theta * dc.h, y[0]);
      const double v = y[1];
      if (v != 0.0) {
        const int s = (v > 0.0) ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign) {
          const double r_ev =
              refine_event(dc, prev_theta, theta, config.event_refine_tol);
          step_events.push_back(r_ev);
        }
        prev_sign = s;
        prev_theta = theta;
      }
    }

    // record samples: events, cap-fill points, step end
    double last_r = b.samples().back().r;
    auto fill_to = [&](double target) {
      while (target - last_r > cap) {
        const double rr = last_r + cap;
        const double theta = (rr - dc.x0) / dc.h;
        const auto y = dc.eval(std::clamp(theta, 0.0, 1.0));
        b.add_sample({rr, y[0], y[1]});
        last_r = rr;
      }
    };
    for (double r_ev : step_events) {
      fill_to(r_ev);
      const double theta = std::clamp((r_ev - dc.x0) / dc.h, 0.0, 1.0);
      const auto y = dc.eval(theta);
      b.add_sample({r_ev, y[0], y[1]});
      b.add_event(r_ev);
      last_r = std::max(last_r, r_ev);
      ++n_events;
    }
    fill_to(x1);
    b.add_sample({x1, y1[0], y1[1]});
    if (y1[0] < floor) throw PositivityBreach(x1, y1[0]);

    Trajectory::Segment seg;
    seg.form = Trajectory::Segment::Form::kDopri;
    seg.r0 = dc.x0;
    seg.r1 = x1;
    seg.x0 = dc.x0;
    seg.h = dc.h;
    seg.c1 = dc.c1;
    seg.c2 = dc.c2;
    seg.c3 = dc.c3;
    seg.c4 = dc.c4;
    seg.c5 = dc.c5;
    b.add_segment(seg);

    if (config.max_events > 0 && n_events >= config.max_events)
      return StepControl::kStop;
    return StepControl::kContinue;
  };

  detail::dopri5(rhs, start.r, Vec2{start.h, start.dh}, config.r_max,
                 config.rel_tol, config.abs_tol, on_step);
}

}  // namespace detail_radial

Trajectory integrate(const Params& params, const State& start,
                     const SolveConfig& config, SolutionKind kind,
                     double eta) {
  TrajectoryBuilder b(params, kind, eta);
  if (kind == SolutionKind::kSmooth) {
    if (!(eta > 0.0))
      throw std::invalid_argument("integrate: smooth kind requires eta > 0");
    b.add_sample({0.0, eta, 0.0});
    Trajectory::Segment seg;
    seg.form = Trajectory::Segment::Form::kTaylor2;
    seg.r0 = 0.0;
    seg.r1 = start.r;
    seg.a = eta;
    seg.b = -f_eval(params, eta) / (2.0 * params.dim);
    b.add_segment(seg);
  }
  detail_radial::append_radial_run(b, params, start, config);
  return b.take();
}

namespace {

Trajectory make_flat(const Params& params, double eta, double r_max,
                     double cap) {
  TrajectoryBuilder b(params, SolutionKind::kSmooth, eta);
  Trajectory::Segment seg;
  seg.form = Trajectory::Segment::Form::kFlat;
  seg.r0 = 0.0;
  seg.r1 = r_max;
  seg.a = eta;
  b.add_segment(seg);
  for (double r = 0.0; r < r_max; r += cap) b.add_sample({r, eta, 0.0});
  b.add_sample({r_max, eta, 0.0});
  return b.take();
}

}  // namespace

Trajectory solve_smooth(const Params& params, double eta, SolveConfig config,
                        int k_target) {
  if (!(eta > 0.0))
    throw std::invalid_argument("solve_smooth: eta must be > 0");
  const DerivedConstants cons = derive_constants(params);
  const double cap = detail_config::sample_cap_of(params, config);

  if (std::abs(eta - cons.xi) <= 1e-12 * cons.xi) {
    double r_max = config.r_max;
    if (!(r_max > 0.0))
      r_max = cons.spacing_limit * (k_target > 0 ? k_target + 2 : 10);
    return make_flat(params, eta, r_max, cap);
  }

  const double r0 = smooth_start_radius(params, eta, config.abs_tol);
  const State start = taylor_start_smooth(params, eta, r0);

  if (k_target <= 0) {
    if (!(config.r_max > 0.0))
      throw std::invalid_argument(
          "solve_smooth: either r_max or k_target must be set");
    return integrate(params, start, config, SolutionKind::kSmooth, eta);
  }

  config.max_events = k_target;
  double guess = 1.3 * r1_lower_bound(params, eta) +
                 (k_target + 1) * cons.spacing_limit;
  for (int attempt = 0; attempt < 12; ++attempt) {
    config.r_max = guess;
    Trajectory traj =
        integrate(params, start, config, SolutionKind::kSmooth, eta);
    if (static_cast<int>(traj.events().size()) >= k_target) return traj;
    guess *= 1.6;
  }
  throw InsufficientRange("solve_smooth: could not reach " +
                          std::to_string(k_target) + " critical points");
}

}  // namespace thinfilm
