#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "thinfilm/errors.hpp"

namespace thinfilm::detail {

using Vec2 = std::array<double, 2>;

/// Dense-output coefficients of one accepted Dormand-Prince 5(4) step.
/// eval(theta) reproduces y(x0 + theta*h) to the order of the method;
/// theta = 0 and theta = 1 return the step endpoints exactly as stored.
struct DenseCoef {
  double x0 = 0.0;
  double h = 0.0;
  Vec2 c1{}, c2{}, c3{}, c4{}, c5{};

  Vec2 eval(double theta) const {
    const double th1 = 1.0 - theta;
    Vec2 y;
    for (int i = 0; i < 2; ++i) {
      y[i] = c1[i] +
             theta * (c2[i] +
                      th1 * (c3[i] + theta * (c4[i] + th1 * c5[i])));
    }
    return y;
  }
  double x1() const { return x0 + h; }
};

enum class StepControl : std::uint8_t { kContinue, kStop };

/// Dormand-Prince RK5(4) with PI step-size control for 2-component systems.
///
/// Integrates y' = rhs(x, y) from x0 toward x_end (either direction). After
/// every accepted step calls on_step(dense, x1, y1); returning kStop ends the
/// run. Throws StepFailure on step underflow / step-budget exhaustion.
template <class RHS, class StepCb>
void dopri5(RHS&& rhs, double x0, Vec2 y0, double x_end, double rtol,
            double atol, StepCb&& on_step, double max_step = 0.0) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  // e = b5 - b4 (error estimator weights)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  // dense output weights (Hairer's contd5)
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;

  if (x_end == x0) return;
  const double dir = (x_end >= x0) ? 1.0 : -1.0;
  const double hmax =
      (max_step > 0.0) ? max_step : std::abs(x_end - x0);

  Vec2 k1, k2, k3, k4, k5, k6, k7, y1, yerr;
  rhs(x0, y0, k1);

  // initial step size (Hairer's hinit, simplified)
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sk = atol + rtol * std::abs(y0[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y0[i] / sk) * (y0[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);
    Vec2 yt, ft;
    for (int i = 0; i < 2; ++i) yt[i] = y0[i] + dir * h * k1[i];
    rhs(x0 + dir * h, yt, ft);
    double der2 = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sk = atol + rtol * std::abs(y0[i]);
      der2 += ((ft[i] - k1[i]) / sk) * ((ft[i] - k1[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 =
        (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                         : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, hmax});
  }

  constexpr double kSafe = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;
  constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  double facold = 1e-4;
  double x = x0;
  bool last = false;
  long steps = 0;
  constexpr long kMaxSteps = 50'000'000;

  while (!last) {
    if (++steps > kMaxSteps)
      throw StepFailure("dopri5: step budget exhausted at x = " +
                        std::to_string(x));
    if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, std::abs(x)))
      throw StepFailure("dopri5: step size underflow at x = " +
                        std::to_string(x));
    h = std::min(h, hmax);
    if (std::abs(x_end - x) <= h) {
      h = std::abs(x_end - x);
      last = true;
    }
    const double hs = dir * h;

    Vec2 yt;
    for (int i = 0; i < 2; ++i) yt[i] = y0[i] + hs * a21 * k1[i];
    rhs(x + c2 * hs, yt, k2);
    for (int i = 0; i < 2; ++i)
      yt[i] = y0[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(x + c3 * hs, yt, k3);
    for (int i = 0; i < 2; ++i)
      yt[i] = y0[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(x + c4 * hs, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y0[i] +
              hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(x + c5 * hs, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y0[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(x + hs, yt, k6);
    for (int i = 0; i < 2; ++i)
      y1[i] = y0[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                            a75 * k5[i] + a76 * k6[i]);
    rhs(x + hs, y1, k7);  // FSAL

    double err = 0.0;
    bool finite = true;
    for (int i = 0; i < 2; ++i) {
      yerr[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      const double sk =
          atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      err += (yerr[i] / sk) * (yerr[i] / sk);
      finite = finite && std::isfinite(y1[i]);
    }
    err = std::sqrt(err / 2.0);
    if (!finite) err = 10.0;

    const double fac11 = std::pow(err, kExpo1);
    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      DenseCoef dc;
      dc.x0 = x;
      dc.h = hs;
      for (int i = 0; i < 2; ++i) {
        const double ydiff = y1[i] - y0[i];
        const double bspl = hs * k1[i] - ydiff;
        dc.c1[i] = y0[i];
        dc.c2[i] = ydiff;
        dc.c3[i] = bspl;
        dc.c4[i] = ydiff - hs * k7[i] - bspl;
        dc.c5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                         d6 * k6[i] + d7 * k7[i]);
      }
      x += hs;
      y0 = y1;
      k1 = k7;
      if (on_step(dc, x, y0) == StepControl::kStop) return;
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
      h = h / fac;
    } else {
      last = false;
      const double fac = std::min(1.0 / kFacMin, fac11 / kSafe);
      h = h / fac;
    }
  }
}

}  // namespace thinfilm::detail
