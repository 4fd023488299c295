#pragma once

#include <array>
#include <vector>

#include "thinfilm/model.hpp"

namespace thinfilm {

/// One point of a radial solution: (r, h(r), h'(r)).
struct State {
  double r;
  double h;
  double dh;
};

enum class SolutionKind { kSmooth, kRupture };

/// Solver knobs. Zeros mean "derive the documented default from Params":
/// h_floor defaults to 1e-8 * xi, max_sample_spacing to spacing_limit / 20.
struct SolveConfig {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double r_max = 0.0;               ///< integration horizon (required > 0)
  double h_floor = 0.0;             ///< positivity guard
  double event_refine_tol = 1e-12;  ///< relative tolerance for h' = 0 roots
  double max_sample_spacing = 0.0;  ///< cap on recorded sample gaps
  int max_events = 0;               ///< stop after this many events (0 = off)
};

/// Piecewise representation of one radial solution, dense enough that
/// evaluate_at anywhere in range is as accurate as the solver tolerance.
///
/// Segment forms:
///  - kTaylor2:   h = eta + c2 r^2 on [0, r0] (smooth start; c2 = -f(eta)/2N)
///  - kFlat:      h = eta exactly (the constant solution)
///  - kDopri:     dense output of one accepted RK step in r
///  - kNormalized:dense RK step of the log-variable rupture profile; stores
///                phi(t), phi_t(t) with t = -log r and maps back to (h, h')
///  - kAsymptote: h = c* r^{2/(a+1)} (1 + kappa r^beta) below the smallest
///                computed radius of a rupture run
class Trajectory {
 public:
  struct Segment {
    enum class Form : unsigned char {
      kTaylor2,
      kFlat,
      kDopri,
      kNormalized,
      kAsymptote
    };
    Form form;
    double r0, r1;  // covered radius range, r0 < r1
    // kDopri: x0,h + contd5 coefficients for (h, dh)
    // kNormalized: x0,h in t + contd5 coefficients for (phi, dphi)
    // kTaylor2: a = eta, b = c2
    // kAsymptote: a = c_star, b = kappa
    double x0 = 0.0, h = 0.0;
    std::array<double, 2> c1{}, c2{}, c3{}, c4{}, c5{};
    double a = 0.0, b = 0.0;
  };

  SolutionKind kind() const { return kind_; }
  /// Center height; only meaningful for smooth trajectories.
  double eta() const { return eta_; }
  const Params& params() const { return params_; }

  /// Recorded samples: strictly increasing r, h > 0 throughout. Includes
  /// every refined event point.
  const std::vector<State>& samples() const { return samples_; }

  /// Refined radii with h'(r) = 0, in increasing order.
  const std::vector<double>& events() const { return events_; }

  /// Piecewise interpolation data (read-only; the scaling group transforms
  /// segments exactly).
  const std::vector<Segment>& segments() const { return segments_; }

  double r_front() const;
  double r_back() const;

  /// Interpolated state; exact at sample points. Throws OutOfRange outside
  /// [r_front, r_back] (rupture trajectories extend down to r = 0+ via the
  /// asymptote segment).
  State evaluate_at(double r) const;

  /// Rupture-only accessors for the near-origin model h ~ c* r^{2/(a+1)}.
  double rupture_c_star() const { return rupture_c_star_; }
  double rupture_kappa() const { return rupture_kappa_; }

 private:
  friend class TrajectoryBuilder;
  Trajectory(const Params& p, SolutionKind k, double eta)
      : params_(p), kind_(k), eta_(eta) {}

  State eval_segment(const Segment& s, double r) const;

  Params params_;
  SolutionKind kind_;
  double eta_;
  std::vector<State> samples_;
  std::vector<Segment> segments_;
  std::vector<double> events_;
  double rupture_c_star_ = 0.0;
  double rupture_kappa_ = 0.0;
};

/// Incremental constructor used by the solvers; keeps Trajectory immutable
/// once built.
class TrajectoryBuilder {
 public:
  TrajectoryBuilder(const Params& p, SolutionKind k, double eta)
      : traj_(p, k, eta) {}

  void add_segment(const Trajectory::Segment& s);
  void add_sample(const State& s);
  void add_event(double r);
  void set_rupture_asymptote(double c_star, double kappa);
  Trajectory take();

  const std::vector<State>& samples() const { return traj_.samples_; }

 private:
  Trajectory traj_;
  bool taken_ = false;
};

}  // namespace thinfilm
