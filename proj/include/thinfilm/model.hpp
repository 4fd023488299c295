#pragma once

#include <complex>

namespace thinfilm {

/// Problem triple (alpha, N, p) for the steady-state equation
///   dh = h^{-alpha}/alpha - p   (radial, Neumann).
///
/// alpha > 1, N >= 2, p > 0; the constructor rejects anything else.
struct Params {
  double alpha;
  int dim;
  double pressure;

  /// Fault-injection hook used by the verification suites: a constant added
  /// to f(h) only (the antiderivative F is left alone, so a nonzero shift
  /// deliberately breaks F' = f and must trip the energy checks).
  /// Always zero in normal use.
  double f_shift = 0.0;

  Params(double alpha_, int dim_, double pressure_);
};

/// Closed-form constants derived from a Params triple.
///
/// exponents a1, a2 solve lambda^2 - A*lambda + g'(1) = 0; they are stored as
/// complex numbers even when the discriminant is nonnegative (imaginary part
/// zero), so downstream code has a single code path and may use .real() when
/// it only needs the decay rate.
struct DerivedConstants {
  double xi;             ///< flat-solution height (alpha p)^{-1/alpha}
  double c_star;         ///< rupture amplitude c*
  double cap_a;          ///< A = N - 2 + 4/(alpha+1)
  double cap_c;          ///< C = p / c*
  double g_prime_1;      ///< g'(1) = 2(N - 2 + 2/(alpha+1))
  std::complex<double> a1, a2;
  double beta;           ///< forcing exponent 2 alpha/(alpha+1)
  double spacing_limit;  ///< pi (alpha p)^{-(1+alpha)/(2 alpha)}
};

DerivedConstants derive_constants(const Params& params);

/// f(h) = p - h^{-alpha}/alpha. Strictly increasing, f(xi) = 0.
/// Throws std::domain_error for h <= 0 (caller bug, never clamped).
double f_eval(const Params& params, double h);

/// Antiderivative F(h) = h^{1-alpha}/(alpha(alpha-1)) + p h; convex with its
/// minimum at xi, F -> infinity as h -> 0+ or h -> infinity.
double F_eval(const Params& params, double h);

/// g(phi) = (2/(alpha+1))(N-2+2/(alpha+1)) (phi - phi^{-alpha}); g(1) = 0.
double g_eval(const Params& params, double phi);

/// G(phi) with G' = g and minimum at phi = 1.
double G_eval(const Params& params, double phi);

/// g~(psi) = g(1+psi) - g'(1) psi, the quadratic remainder driving the
/// Picard operator. g~(0) = g~'(0) = 0.
double g_tilde_eval(const Params& params, double psi);

}  // namespace thinfilm
