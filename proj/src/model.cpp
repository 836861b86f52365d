#include "spinsync/model.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace spinsync {

SpinPairModel build_model(double omega2, double g) {
  if (!(omega2 > 0.0))
    throw std::invalid_argument("build_model: omega2 must be positive");
  if (!(g >= -1.0 && g <= 1.0))
    throw std::invalid_argument("build_model: g must lie in [-1, 1]");

  SpinPairModel m;
  m.omega2 = omega2;
  m.g = g;
  m.hamiltonian = m.omega1 * pauli(Axis::z, 1) + omega2 * pauli(Axis::z, 2);
  m.coupling = (1.0 + g) * (pauli(Axis::z, 1) + pauli(Axis::z, 2)) +
               (1.0 - g) * (pauli(Axis::x, 1) + pauli(Axis::x, 2));

  // H is diagonal in the computational basis, so the eigenbasis is a
  // permutation: sort energies descending, stable in the computational index.
  const std::array<double, 4> diag = {m.omega1 + omega2, m.omega1 - omega2,
                                      -m.omega1 + omega2, -m.omega1 - omega2};
  std::array<int, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return diag[a] > diag[b]; });

  m.basis = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    m.energies(k) = diag[order[k]];
    m.basis(order[k], k) = 1.0;
  }
  m.coupling_eigen = m.basis.adjoint() * m.coupling * m.basis;
  return m;
}

Mat4 product_state(double theta1, double phi1, double theta2, double phi2) {
  Eigen::Vector2cd s1{std::cos(theta1), std::exp(kI * phi1) * std::sin(theta1)};
  Eigen::Vector2cd s2{std::cos(theta2), std::exp(kI * phi2) * std::sin(theta2)};
  Vec4 psi;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) psi(2 * a + b) = s1(a) * s2(b);
  return psi * psi.adjoint();
}

Mat4 bell_state(Bell which) {
  Vec4 psi = Vec4::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  switch (which) {
    case Bell::psi_minus: psi(1) = r; psi(2) = -r; break;
    case Bell::psi_plus:  psi(1) = r; psi(2) = r; break;
    case Bell::phi_plus:  psi(0) = r; psi(3) = r; break;
  }
  return psi * psi.adjoint();
}

}  // namespace spinsync
