#include "spinsync/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinsync {
namespace {

constexpr double kPi = std::numbers::pi;

// w * coth(beta w / 2), finite at w = 0.
double wcoth(double w, double beta) {
  const double u = 0.5 * beta * w;
  if (std::abs(u) < 1e-6) return (2.0 / beta) * (1.0 + u * u / 3.0);
  return w / std::tanh(u);
}

double sinc(double u) {
  if (u == 0.0) return 1.0;
  return std::sin(u) / u;
}

// Effective cutoff: beyond it coth(beta w / 2) is 1 to machine precision and
// the remainder of the rate integral closes analytically.
double cutoff(const BathParams& bath, const QuadratureSpec& spec) {
  return std::max(spec.upper_mult * bath.omega_c, 45.0 / bath.beta());
}

// Analytic remainder of the principal-value integral over [L, inf) with
// coth -> 1: integrand (x w + s w^2) * gamma wc^2 / ((wc^2+w^2)(w^2-x^2)).
double rate_tail(double x, double s, double L, const BathParams& bath) {
  const double wc = bath.omega_c, c = std::abs(x);
  const double pref = bath.gamma * wc * wc / (x * x + wc * wc);
  const double odd = 0.5 * x * std::log((L * L + wc * wc) / (L * L - x * x));
  const double even = 0.5 * c * std::log((L + c) / (L - c)) +
                      wc * (0.5 * kPi - std::atan(L / wc));
  return pref * (odd + s * even);
}

}  // namespace

void validate_bath(const BathParams& bath) {
  if (!(bath.gamma >= 0.0)) throw std::invalid_argument("bath: gamma must be nonnegative");
  if (!(bath.omega_c > 0.0)) throw std::invalid_argument("bath: omega_c must be positive");
  if (!(bath.temperature > 0.0))
    throw std::invalid_argument("bath: temperature must be positive");
}

std::vector<std::string> bath_warnings(const BathParams& bath) {
  std::vector<std::string> w;
  if (bath.omega_c <= 10.0)
    w.push_back("omega_c <= 10: cutoff not well separated from system frequencies");
  if (bath.gamma * bath.omega_c >= 0.1)
    w.push_back("gamma * omega_c >= 0.1: weak-coupling assumption strained");
  return w;
}

double spectral_density(double omega, const BathParams& bath) {
  if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
  const double wc2 = bath.omega_c * bath.omega_c;
  return bath.gamma * omega * wc2 / (wc2 + omega * omega);
}

std::complex<double> gamma_rate(double x, RateSign sign, const BathParams& bath,
                                const QuadratureSpec& spec) {
  validate_bath(bath);
  const double beta = bath.beta(), g = bath.gamma, wc = bath.omega_c;
  const bool plus = sign == RateSign::plus;
  const double s = plus ? -1.0 : 1.0;

  double re;
  if (x == 0.0) {
    re = kPi * g / (4.0 * beta);
  } else {
    const double u = beta * x;  // coth(bx/2) -/+ 1, stable through expm1
    const double occ = plus ? 2.0 / std::expm1(u) : -2.0 / std::expm1(-u);
    const double j_signed = g * x * wc * wc / (wc * wc + x * x);
    re = (kPi / 8.0) * j_signed * occ;
  }

  double im;
  if (std::abs(x) < 1e-9) {
    im = s * kPi * g * wc / 8.0;
  } else {
    const double L = cutoff(bath, spec);
    const double c = std::abs(x);
    if (c >= 0.5 * L)
      throw std::invalid_argument("gamma_rate: |x| too close to the integration cutoff");
    const Integrand f = [&](double w) {
      const double q = g * wc * wc / (wc * wc + w * w) * (x * wcoth(w, beta) + s * w * w);
      return q / (w + c);  // remaining factor 1/(w - c) handled as principal value
    };
    const QuadResult pv = integrate_pv(f, 0.0, L, c, spec);
    require_converged(pv, "gamma_rate");
    im = 0.25 * (pv.value + rate_tail(x, s, L, bath));
  }
  return {re, im};
}

double dephasing_gamma(double t, double lambda_a, double lambda_b, const BathParams& bath,
                       const QuadratureSpec& spec) {
  validate_bath(bath);
  if (t < 0.0) throw std::invalid_argument("dephasing_gamma: t must be >= 0");
  const double dl = lambda_a - lambda_b;
  if (t == 0.0 || dl == 0.0) return 0.0;
  const double beta = bath.beta(), g = bath.gamma, wc = bath.omega_c;
  const double L = cutoff(bath, spec);
  const Integrand f = [&](double w) {
    const double u = 0.5 * w * t;
    const double sc = sinc(u);
    return g * wc * wc / (wc * wc + w * w) * wcoth(w, beta) * 0.25 * t * t * sc * sc;
  };
  QuadratureSpec local = spec;  // oscillation scale ~ 2pi/t needs panels to match
  local.max_intervals = std::max<int>(
      spec.max_intervals, std::min(1500000.0, 3.0 * L * t / kPi + 2048.0));
  const QuadResult r = integrate(f, 0.0, L, local);
  require_converged(r, "dephasing_gamma");
  // coth ~ 1 beyond L; the non-oscillatory half of sin^2 integrates exactly,
  // the oscillatory half is O(gamma wc^2 / (t L^3)).
  const double tail = 0.25 * g * std::log1p(wc * wc / (L * L));
  return 2.0 * dl * dl * (r.value + tail);
}

double dephasing_lamb(double t, double lambda_a, double lambda_b, const BathParams& bath,
                      const QuadratureSpec& spec) {
  validate_bath(bath);
  if (t < 0.0) throw std::invalid_argument("dephasing_lamb: t must be >= 0");
  const double dl2 = lambda_a * lambda_a - lambda_b * lambda_b;
  if (t == 0.0 || dl2 == 0.0) return 0.0;
  const double g = bath.gamma, wc = bath.omega_c;
  const double L = cutoff(bath, spec);
  const Integrand f = [&](double w) {
    return g * wc * wc / (wc * wc + w * w) * t * sinc(w * t);
  };
  QuadratureSpec local = spec;
  local.max_intervals = std::max<int>(
      spec.max_intervals, std::min(1500000.0, 3.0 * L * t / kPi + 2048.0));
  const QuadResult r = integrate(f, 0.0, L, local);
  require_converged(r, "dephasing_lamb");
  return dl2 * r.value;
}

}  // namespace spinsync
