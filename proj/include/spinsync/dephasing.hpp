// dephasing.hpp — exact longitudinal-coupling channel and its asymptotic map
#pragma once

#include <array>

#include "spinsync/bath.hpp"
#include "spinsync/model.hpp"

namespace spinsync {

// Closed-form channel available when system and coupling commute (g = 1).
// Every matrix element evolves independently in the computational basis:
//   rho_ab(t) = rho_ab(0) exp(-i w_ab t) exp(-(Gamma_ab(t) + i L_ab(t)))
// with Gamma_ab = 2 (la - lb)^2 I(t) and L_ab = (la^2 - lb^2) K(t).
struct DephasingChannel {
  SpinPairModel model;
  BathParams bath;
  bool include_lamb{true};
  std::array<double, 4> lambda{};  // coupling eigenvalues, computational order
  std::array<double, 4> level{};   // Hamiltonian diagonal, computational order

  // Shared decay kernel I(t) = Integral J(w)/w^2 coth(bw/2) sin^2(wt/2) dw,
  // evaluated by Matsubara summation with digamma-closed tails.
  double decay_integral(double t) const;

  // Phase kernel K(t) = Integral J(w)/w^2 sin(wt) dw = (pi gamma / 2)(1 - e^{-wc t}).
  double phase_integral(double t) const;

  double gamma_ab(double t, int a, int b) const;
  double lamb_ab(double t, int a, int b) const;

  Mat4 evolve(const Mat4& initial, double t) const;
};

// Requires the model coupling to be diagonal alongside H (g = 1).
DephasingChannel make_dephasing_channel(const SpinPairModel& model, const BathParams& bath,
                                        bool include_lamb = true);

// Long-time limit of the channel: diagonal preserved, only the degenerate
// rho_23 / rho_32 coherence survives, carrying phase e^{-i xi} / e^{+i xi}
// with xi the accumulated detuning phase.
Mat4 asymptotic_state(const Mat4& initial, double xi);

}  // namespace spinsync
