#include "thinfilm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "thinfilm/errors.hpp"

namespace thinfilm {

namespace {
// contd5 evaluation for one component pair
inline std::array<double, 2> dense_eval(const Trajectory::Segment& s,
                                        double theta) {
  const double th1 = 1.0 - theta;
  std::array<double, 2> y;
  for (int i = 0; i < 2; ++i) {
    y[i] = s.c1[i] + theta * (s.c2[i] +
                              th1 * (s.c3[i] + theta * (s.c4[i] + th1 * s.c5[i])));
  }
  return y;
}
}  // namespace

double Trajectory::r_front() const { return samples_.front().r; }
double Trajectory::r_back() const { return samples_.back().r; }

State Trajectory::eval_segment(const Segment& s, double r) const {
  using Form = Segment::Form;
  switch (s.form) {
    case Form::kFlat:
      return {r, s.a, 0.0};
    case Form::kTaylor2:
      return {r, s.a + s.b * r * r, 2.0 * s.b * r};
    case Form::kDopri: {
      double theta = (r - s.x0) / s.h;
      theta = std::clamp(theta, 0.0, 1.0);
      const auto y = dense_eval(s, theta);
      return {r, y[0], y[1]};
    }
    case Form::kNormalized: {
      const double t = -std::log(r);
      double theta = (t - s.x0) / s.h;
      theta = std::clamp(theta, 0.0, 1.0);
      const auto y = dense_eval(s, theta);  // (phi, phi_t)
      const double e = 2.0 / (params_.alpha + 1.0);
      const double re = std::pow(r, e);
      const double hval = rupture_c_star_ * y[0] * re;
      const double dh = rupture_c_star_ * re / r * (e * y[0] - y[1]);
      return {r, hval, dh};
    }
    case Form::kAsymptote: {
      const double e = 2.0 / (params_.alpha + 1.0);
      const double beta = 2.0 * params_.alpha / (params_.alpha + 1.0);
      const double rb = std::pow(r, beta);
      const double hval =
          rupture_c_star_ * std::pow(r, e) * (1.0 + rupture_kappa_ * rb);
      const double dh = rupture_c_star_ * std::pow(r, e - 1.0) *
                        (e * (1.0 + rupture_kappa_ * rb) +
                         rupture_kappa_ * beta * rb);
      return {r, hval, dh};
    }
  }
  throw std::logic_error("Trajectory: unknown segment form");
}

State Trajectory::evaluate_at(double r) const {
  if (segments_.empty()) throw OutOfRange("evaluate_at: empty trajectory");
  const double lo = segments_.front().r0;
  const double hi = segments_.back().r1;
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (r < lo - slack || r > hi + slack)
    throw OutOfRange("evaluate_at: r = " + std::to_string(r) +
                     " outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  r = std::clamp(r, lo, hi);

  // exact sample hit -> return it bit-for-bit
  auto it = std::lower_bound(
      samples_.begin(), samples_.end(), r,
      [](const State& s, double rr) { return s.r < rr; });
  if (it != samples_.end() && it->r == r) return *it;

  auto seg = std::upper_bound(
      segments_.begin(), segments_.end(), r,
      [](double rr, const Segment& s) { return rr < s.r0; });
  if (seg != segments_.begin()) --seg;
  // guard against landing on the previous segment at a shared endpoint
  while (seg + 1 != segments_.end() && r > seg->r1) ++seg;
  return eval_segment(*seg, r);
}

void TrajectoryBuilder::add_segment(const Trajectory::Segment& s) {
  if (!(s.r0 < s.r1))
    throw std::logic_error("TrajectoryBuilder: empty segment");
  if (!traj_.segments_.empty() &&
      std::abs(traj_.segments_.back().r1 - s.r0) >
          1e-9 * std::max(1.0, std::abs(s.r0)))
    throw std::logic_error("TrajectoryBuilder: non-contiguous segment");
  traj_.segments_.push_back(s);
}

void TrajectoryBuilder::add_sample(const State& s) {
  if (!traj_.samples_.empty()) {
    const double last = traj_.samples_.back().r;
    if (s.r <= last) return;  // dedupe shared endpoints
  }
  traj_.samples_.push_back(s);
}

void TrajectoryBuilder::add_event(double r) {
  if (!traj_.events_.empty() &&
      r - traj_.events_.back() < 1e-9 * std::max(1.0, r))
    return;
  traj_.events_.push_back(r);
}

void TrajectoryBuilder::set_rupture_asymptote(double c_star, double kappa) {
  traj_.rupture_c_star_ = c_star;
  traj_.rupture_kappa_ = kappa;
}

Trajectory TrajectoryBuilder::take() {
  if (taken_) throw std::logic_error("TrajectoryBuilder: already taken");
  taken_ = true;
  if (traj_.samples_.empty())
    throw std::logic_error("TrajectoryBuilder: no samples");
  return std::move(traj_);
}

}  // namespace thinfilm
