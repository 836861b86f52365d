#include "spinsync/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinsync {
namespace {

constexpr double kPi = std::numbers::pi;

// Digamma for positive arguments: recurrence up to 8, then the Bernoulli series.
double digamma(double x) {
  double r = 0.0;
  while (x < 8.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double ix = 1.0 / x, ix2 = ix * ix;
  r += std::log(x) - 0.5 * ix -
       ix2 * (1.0 / 12.0 -
              ix2 * (1.0 / 120.0 -
                     ix2 * (1.0 / 252.0 - ix2 * (1.0 / 240.0 - ix2 * (1.0 / 132.0)))));
  return r;
}

}  // namespace

double DephasingChannel::decay_integral(double t) const {
  if (t < 0.0) throw std::invalid_argument("decay_integral: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double beta = bath.beta(), g = bath.gamma, wc = bath.omega_c;
  const auto f = [t](double s) { return -std::expm1(-s * t) / s; };  // (1 - e^{-st})/s
  const double fwc = f(wc);
  double total = (kPi * g / (2.0 * beta)) * (t - fwc);

  const double nu1 = 2.0 * kPi / beta;
  const double c = beta * wc / (2.0 * kPi);
  // Sum Matsubara terms until e^{-nu t} is dead, then close the remaining
  // exponential-free tail with digamma identities.
  long n_sum = static_cast<long>(std::ceil(45.0 / (nu1 * t))) + 60;
  n_sum = std::clamp<long>(n_sum, static_cast<long>(c) + 60, 3000000);
  double sum = 0.0;
  for (long n = 1; n <= n_sum; ++n) {
    const double nu = nu1 * n;
    if (std::abs(nu - wc) < 1e-8 * wc) {
      // Degenerate Matsubara frequency: divided difference -> derivative of f.
      const double m = 0.5 * (nu + wc);
      const double fp = (t * std::exp(-m * t) * m + std::expm1(-m * t)) / (m * m);
      sum += -fp / (nu + wc);
    } else {
      sum += (fwc - f(nu)) / (nu * nu - wc * wc);
    }
  }
  const double b2pi = beta / (2.0 * kPi);
  const double np1 = static_cast<double>(n_sum) + 1.0;
  const double tail_even =
      b2pi * b2pi / (2.0 * c) * (digamma(np1 + c) - digamma(np1 - c));
  const double tail_odd = b2pi * b2pi * b2pi / (c * c) *
                          (digamma(np1) - 0.5 * (digamma(np1 - c) + digamma(np1 + c)));
  sum += fwc * tail_even - tail_odd;
  total += (kPi * g * wc * wc / beta) * sum;
  return total;
}

double DephasingChannel::phase_integral(double t) const {
  if (t < 0.0) throw std::invalid_argument("phase_integral: t must be >= 0");
  return 0.5 * kPi * bath.gamma * (-std::expm1(-bath.omega_c * t));
}

double DephasingChannel::gamma_ab(double t, int a, int b) const {
  const double dl = lambda[a] - lambda[b];
  return 2.0 * dl * dl * decay_integral(t);
}

double DephasingChannel::lamb_ab(double t, int a, int b) const {
  if (!include_lamb) return 0.0;
  const double dl2 = lambda[a] * lambda[a] - lambda[b] * lambda[b];
  return dl2 == 0.0 ? 0.0 : dl2 * phase_integral(t);
}

Mat4 DephasingChannel::evolve(const Mat4& initial, double t) const {
  if (t < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
  check_density_matrix(initial);
  const double it = decay_integral(t);
  const double kt = phase_integral(t);
  Mat4 out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == b) {
        out(a, b) = initial(a, b);
        continue;
      }
      const double dl = lambda[a] - lambda[b];
      const double gamma = 2.0 * dl * dl * it;
      const double lamb =
          include_lamb ? (lambda[a] * lambda[a] - lambda[b] * lambda[b]) * kt : 0.0;
      const double w_ab = level[a] - level[b];
      out(a, b) = initial(a, b) * std::exp(-gamma) * std::exp(-kI * (w_ab * t + lamb));
    }
  }
  return out;
}

DephasingChannel make_dephasing_channel(const SpinPairModel& model, const BathParams& bath,
                                        bool include_lamb) {
  validate_bath(bath);
  const double offdiag =
      (model.coupling - Mat4(model.coupling.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  if (offdiag > 1e-12)
    throw std::invalid_argument(
        "make_dephasing_channel: coupling not diagonal; the exact channel needs g = 1");
  DephasingChannel ch;
  ch.model = model;
  ch.bath = bath;
  ch.include_lamb = include_lamb;
  for (int a = 0; a < 4; ++a) {
    ch.lambda[a] = model.coupling(a, a).real();
    ch.level[a] = model.hamiltonian(a, a).real();
  }
  return ch;
}

Mat4 asymptotic_state(const Mat4& initial, double xi) {
  check_density_matrix(initial);
  Mat4 out = Mat4::Zero();
  out.diagonal() = initial.diagonal();
  out(1, 2) = initial(1, 2) * std::exp(-kI * xi);
  out(2, 1) = initial(2, 1) * std::exp(kI * xi);
  return out;
}

}  // namespace spinsync
