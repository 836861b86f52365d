#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinsync/model.hpp"

using namespace spinsync;

TEST_CASE("build_model validates its parameter domain") {
  CHECK_THROWS_AS(build_model(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_model(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_model(1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(build_model(1.0, -1.5), std::invalid_argument);
  CHECK_NOTHROW(build_model(1.0, 1.0));
  CHECK_NOTHROW(build_model(2.5, -1.0));
}

TEST_CASE("detuning is the full splitting omega2 - omega1") {
  const auto m = build_model(1.02, -1.0);
  CHECK(m.delta() == doctest::Approx(0.02));
  const auto md = build_model_delta(0.15, -1.0);
  CHECK(md.omega2 == doctest::Approx(1.15));
  CHECK(md.delta() == doctest::Approx(0.15));
}

TEST_CASE("energies are sorted descending with the expected values") {
  const auto m = build_model(1.02, -1.0);
  CHECK(m.energies(0) == doctest::Approx(2.02));
  CHECK(m.energies(1) == doctest::Approx(0.02));
  CHECK(m.energies(2) == doctest::Approx(-0.02));
  CHECK(m.energies(3) == doctest::Approx(-2.02));
  // E1 = w2 - w1 belongs to |down up>, E2 = w1 - w2 to |up down>.
  CHECK(std::abs(m.basis(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(m.basis(1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("degenerate pair at zero detuning is tie-broken by computational index") {
  const auto m = build_model(1.0, 0.3);
  CHECK(m.energies(0) == doctest::Approx(2.0));
  CHECK(m.energies(1) == doctest::Approx(0.0));
  CHECK(m.energies(2) == doctest::Approx(0.0));
  CHECK(m.energies(3) == doctest::Approx(-2.0));
  // Ties keep computational order: column 1 is |up down>, column 2 |down up>.
  CHECK(std::abs(m.basis(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(m.basis(2, 2)) == doctest::Approx(1.0));
}

TEST_CASE("hamiltonian and coupling have the advertised form") {
  const double g = 0.4;
  const auto m = build_model(1.3, g);
  const Mat4 h_expected =
      Mat4(pauli(Axis::z, 1) + 1.3 * pauli(Axis::z, 2));
  CHECK((m.hamiltonian - h_expected).norm() == doctest::Approx(0.0));
  const Mat4 v_expected =
      Mat4((1.0 + g) * (pauli(Axis::z, 1) + pauli(Axis::z, 2)) +
           (1.0 - g) * (pauli(Axis::x, 1) + pauli(Axis::x, 2)));
  CHECK((m.coupling - v_expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("transverse coupling matrix in the eigenbasis at g = -1") {
  const auto m = build_model(1.02, -1.0);
  Eigen::Matrix4d s;
  s << 0, 2, 2, 0, 2, 0, 0, 2, 2, 0, 0, 2, 0, 2, 2, 0;
  CHECK((m.coupling_eigen - s.cast<cxd>()).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((m.coupling_eigen - m.coupling_eigen.adjoint()).norm() ==
        doctest::Approx(0.0));
  CHECK(m.coupling_eigen.imag().norm() == doctest::Approx(0.0));
}

TEST_CASE("basis transforms round-trip and preserve the Bohr structure") {
  const auto m = build_model(1.37, 0.2);
  Mat4 rho = bell_state(Bell::phi_plus);
  CHECK((m.from_eigenbasis(m.to_eigenbasis(rho)) - rho).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
  const Mat4 h_eig = m.to_eigenbasis(m.hamiltonian);
  for (int i = 0; i < 4; ++i) CHECK(h_eig(i, i).real() == doctest::Approx(m.energies(i)));
  CHECK(m.bohr(0, 3) == doctest::Approx(2.0 * (1.0 + 1.37)).epsilon(1e-12));
  CHECK(m.bohr(1, 2) == doctest::Approx(2.0 * 0.37));
}

TEST_CASE("product_state matches single-spin expectations") {
  const double t1 = M_PI / 4, p1 = 0.0, t2 = M_PI / 8, p2 = M_PI / 2;
  const Mat4 rho = product_state(t1, p1, t2, p2);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK((rho * rho - rho).norm() == doctest::Approx(0.0).epsilon(1e-14));  // pure
  CHECK((pauli(Axis::x, 1) * rho).trace().real() ==
        doctest::Approx(std::sin(2 * t1) * std::cos(p1)));
  CHECK((pauli(Axis::z, 1) * rho).trace().real() == doctest::Approx(std::cos(2 * t1)));
  CHECK((pauli(Axis::x, 2) * rho).trace().real() ==
        doctest::Approx(std::sin(2 * t2) * std::cos(p2)));
  CHECK((pauli(Axis::y, 2) * rho).trace().real() ==
        doctest::Approx(std::sin(2 * t2) * std::sin(p2)));
  CHECK((pauli(Axis::z, 2) * rho).trace().real() == doctest::Approx(std::cos(2 * t2)));
}

TEST_CASE("bell states are pure with the right support") {
  const Mat4 sm = bell_state(Bell::psi_minus);
  CHECK(sm.trace().real() == doctest::Approx(1.0));
  CHECK(sm(1, 1).real() == doctest::Approx(0.5));
  CHECK(sm(2, 2).real() == doctest::Approx(0.5));
  CHECK(sm(1, 2).real() == doctest::Approx(-0.5));
  const Mat4 sp = bell_state(Bell::psi_plus);
  CHECK(sp(1, 2).real() == doctest::Approx(0.5));
  const Mat4 fp = bell_state(Bell::phi_plus);
  CHECK(fp(0, 3).real() == doctest::Approx(0.5));
  CHECK(fp(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("the singlet is annihilated by the collective coupling at zero detuning") {
  Vec4 singlet;
  singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  for (double g : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
    const auto m = build_model(1.0, g);
    CHECK((m.coupling * singlet).norm() == doctest::Approx(0.0).epsilon(1e-14));
  }
  // With detuning the Hamiltonian mixes the singlet but the coupling still
  // annihilates it (it only sees the collective operators).
  const auto m = build_model(1.3, -1.0);
  CHECK((m.coupling * singlet).norm() == doctest::Approx(0.0).epsilon(1e-14));
}
