// bath.hpp — Lorentz-Drude spectral density and bath correlation coefficients
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "spinsync/quadrature.hpp"

namespace spinsync {

struct BathParams {
  double gamma{1e-3};       // coupling strength
  double omega_c{20.0};     // Lorentz-Drude cutoff
  double temperature{1.0};  // in units of omega1 (k_B = hbar = 1)

  double beta() const { return 1.0 / temperature; }
};

void validate_bath(const BathParams& bath);

// Soft sanity checks behind the weak-coupling / wide-cutoff assumptions:
// omega_c <= 10 or gamma * omega_c >= 0.1 each yield a warning string.
std::vector<std::string> bath_warnings(const BathParams& bath);

// J(w) = gamma * w * wc^2 / (wc^2 + w^2), defined for w >= 0.
double spectral_density(double omega, const BathParams& bath);

enum class RateSign { plus, minus };

// Half-rate coefficients at Bohr frequency x (either sign). The real part is
// the golden-rule relaxation rate, the imaginary part the principal-value
// (Lamb-shift) integral. Satisfies gamma_minus(x) = conj(gamma_plus(-x)) and
// Re >= 0 for both signs at any temperature.
std::complex<double> gamma_rate(double x, RateSign sign, const BathParams& bath,
                                const QuadratureSpec& spec = {});

// Pure-dephasing exponent prefactored by the coupling eigenvalues:
// 2 (la - lb)^2 * Integral J(w)/w^2 coth(bw/2) sin^2(wt/2) dw, via direct
// quadrature. Slow but independent of the series evaluator; used to verify it.
double dephasing_gamma(double t, double lambda_a, double lambda_b, const BathParams& bath,
                       const QuadratureSpec& spec = {});

// Dephasing phase (la^2 - lb^2) * Integral J(w)/w^2 sin(wt) dw, via quadrature.
double dephasing_lamb(double t, double lambda_a, double lambda_b, const BathParams& bath,
                      const QuadratureSpec& spec = {});

}  // namespace spinsync
