// model.hpp — two detuned spins with anisotropy-tunable bath coupling
#pragma once

#include "spinsync/operators.hpp"

namespace spinsync {

// System Hamiltonian H = w1 s1z + w2 s2z with w1 fixed to 1; the bath couples
// through V = (1+g)(s1z+s2z) + (1-g)(s1x+s2x) with anisotropy g in [-1,1].
// g=-1 is purely transverse coupling, g=+1 purely longitudinal (dephasing).
struct SpinPairModel {
  double omega1{1.0};
  double omega2{1.0};
  double g{-1.0};

  Mat4 hamiltonian;       // computational basis, diagonal
  Mat4 coupling;          // computational basis
  Eigen::Vector4d energies;  // descending; ties broken by computational index
  Mat4 basis;             // columns = energy eigenvectors (a signed permutation)
  Mat4 coupling_eigen;    // basis^H * coupling * basis, real symmetric

  double delta() const { return omega2 - omega1; }
  double bohr(int i, int j) const { return energies(i) - energies(j); }

  Mat4 to_eigenbasis(const Mat4& rho_comp) const {
    return basis.adjoint() * rho_comp * basis;
  }
  Mat4 from_eigenbasis(const Mat4& rho_eig) const {
    return basis * rho_eig * basis.adjoint();
  }
};

SpinPairModel build_model(double omega2, double g);

// Detuning is the full splitting, delta = omega2 - omega1 with omega1 = 1.
inline SpinPairModel build_model_delta(double delta, double g) {
  return build_model(1.0 + delta, g);
}

// |psi> = (cos t1, e^{i p1} sin t1) x (cos t2, e^{i p2} sin t2), as a density matrix.
Mat4 product_state(double theta1, double phi1, double theta2, double phi2);

enum class Bell { psi_minus, psi_plus, phi_plus };
Mat4 bell_state(Bell which);

}  // namespace spinsync
