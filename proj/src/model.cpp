#include "thinfilm/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thinfilm {

Params::Params(double alpha_, int dim_, double pressure_)
    : alpha(alpha_), dim(dim_), pressure(pressure_) {
  if (!(alpha > 1.0))
    throw std::invalid_argument("Params: alpha must be > 1, got " +
                                std::to_string(alpha_));
  if (dim < 2)
    throw std::invalid_argument("Params: dim must be >= 2, got " +
                                std::to_string(dim_));
  if (!(pressure > 0.0))
    throw std::invalid_argument("Params: pressure must be > 0, got " +
                                std::to_string(pressure_));
}

DerivedConstants derive_constants(const Params& params) {
  // Evaluated in long double; the extended-precision oracle script
  // (scripts/constants_oracle.py) recomputes everything independently.
  const long double a = params.alpha;
  const long double N = params.dim;
  const long double p = params.pressure;

  DerivedConstants c{};
  c.xi = static_cast<double>(std::pow(a * p, -1.0L / a));
  const long double half_coeff = N - 2.0L + 2.0L / (a + 1.0L);
  c.c_star =
      static_cast<double>(std::pow(2.0L * a / (a + 1.0L) * half_coeff,
                                   -1.0L / (a + 1.0L)));
  c.cap_a = static_cast<double>(N - 2.0L + 4.0L / (a + 1.0L));
  c.cap_c = static_cast<double>(p / static_cast<long double>(c.c_star));
  c.g_prime_1 = static_cast<double>(2.0L * half_coeff);
  c.beta = static_cast<double>(2.0L * a / (a + 1.0L));
  c.spacing_limit = static_cast<double>(
      3.14159265358979323846264338328L *
      std::pow(a * p, -(1.0L + a) / (2.0L * a)));

  const long double A = c.cap_a;
  const long double disc = A * A - 4.0L * static_cast<long double>(c.g_prime_1);
  if (disc >= 0.0L) {
    const long double s = std::sqrt(disc);
    c.a1 = {static_cast<double>((A + s) / 2.0L), 0.0};
    c.a2 = {static_cast<double>((A - s) / 2.0L), 0.0};
  } else {
    const long double s = std::sqrt(-disc);
    c.a1 = {static_cast<double>(A / 2.0L), static_cast<double>(s / 2.0L)};
    c.a2 = {static_cast<double>(A / 2.0L), static_cast<double>(-s / 2.0L)};
  }
  return c;
}

namespace {
void require_positive(double x, const char* fn) {
  if (!(x > 0.0))
    throw std::domain_error(std::string(fn) +
                            ": argument must be > 0, got " + std::to_string(x));
}
}  // namespace

double f_eval(const Params& params, double h) {
  require_positive(h, "f_eval");
  return params.pressure - std::pow(h, -params.alpha) / params.alpha +
         params.f_shift;
}

double F_eval(const Params& params, double h) {
  require_positive(h, "F_eval");
  const double a = params.alpha;
  return std::pow(h, 1.0 - a) / (a * (a - 1.0)) + params.pressure * h;
}

double g_eval(const Params& params, double phi) {
  require_positive(phi, "g_eval");
  const double a = params.alpha;
  const double coeff =
      2.0 / (a + 1.0) * (params.dim - 2.0 + 2.0 / (a + 1.0));
  return coeff * (phi - std::pow(phi, -a));
}

double G_eval(const Params& params, double phi) {
  require_positive(phi, "G_eval");
  const double a = params.alpha;
  const double coeff =
      2.0 / (a + 1.0) * (params.dim - 2.0 + 2.0 / (a + 1.0));
  return coeff * (phi * phi / 2.0 + std::pow(phi, 1.0 - a) / (a - 1.0));
}

double g_tilde_eval(const Params& params, double psi) {
  const double a = params.alpha;
  const double coeff =
      2.0 / (a + 1.0) * (params.dim - 2.0 + 2.0 / (a + 1.0));
  require_positive(1.0 + psi, "g_tilde_eval");
  // g(1+psi) - g'(1) psi = -coeff (a psi + (1+psi)^{-a} - 1); the expm1 form
  // keeps the O(psi^2) remainder accurate for small psi.
  return -coeff * (a * psi + std::expm1(-a * std::log1p(psi)));
}

}  // namespace thinfilm
