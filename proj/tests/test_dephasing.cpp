#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinsync/dephasing.hpp"

using namespace spinsync;

namespace {

const BathParams kCanonical{1e-3, 20.0, 1.0};

DephasingChannel canonical_channel(double omega2 = 1.02, bool lamb = true) {
  return make_dephasing_channel(build_model(omega2, 1.0), kCanonical, lamb);
}

}  // namespace

TEST_CASE("channel construction requires commuting coupling") {
  CHECK_NOTHROW(make_dephasing_channel(build_model(1.02, 1.0), kCanonical));
  CHECK_THROWS_AS(make_dephasing_channel(build_model(1.02, -1.0), kCanonical),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_dephasing_channel(build_model(1.0, 0.999), kCanonical),
                  std::invalid_argument);
}

TEST_CASE("coupling eigenvalues and levels in computational order") {
  const auto ch = canonical_channel();
  CHECK(ch.lambda[0] == doctest::Approx(4.0));
  CHECK(ch.lambda[1] == doctest::Approx(0.0));
  CHECK(ch.lambda[2] == doctest::Approx(0.0));
  CHECK(ch.lambda[3] == doctest::Approx(-4.0));
  CHECK(ch.level[0] == doctest::Approx(2.02));
  CHECK(ch.level[1] == doctest::Approx(-0.02));
  CHECK(ch.level[2] == doctest::Approx(0.02));
  CHECK(ch.level[3] == doctest::Approx(-2.02));
}

TEST_CASE("decay integral matches the independently tabulated series") {
  const auto ch = canonical_channel();
  CHECK(ch.decay_integral(0.5) == doctest::Approx(1.623971539112083e-03).epsilon(2e-7));
  CHECK(ch.decay_integral(5.0) == doctest::Approx(8.717364014666808e-03).epsilon(2e-7));
  CHECK(ch.decay_integral(50.0) == doctest::Approx(7.940319872043718e-02).epsilon(2e-7));
  CHECK(ch.decay_integral(300.0) == doctest::Approx(4.721022804191614e-01).epsilon(2e-7));
  CHECK(ch.decay_integral(1000.0) == doctest::Approx(1.571659709175589e+00).epsilon(2e-7));
  CHECK(ch.decay_integral(0.0) == doctest::Approx(0.0));
}

TEST_CASE("phase integral closed form") {
  const auto ch = canonical_channel();
  CHECK(ch.phase_integral(0.1) == doctest::Approx(1.358212161001078e-03).epsilon(1e-12));
  CHECK(ch.phase_integral(10.0) == doctest::Approx(1.570796326794897e-03).epsilon(1e-12));
  CHECK(ch.phase_integral(0.0) == doctest::Approx(0.0));
}

TEST_CASE("decay integral agrees with direct quadrature of the kernel") {
  const auto ch = canonical_channel();
  for (double t : {0.5, 5.0}) {
    const double series = 2.0 * 16.0 * ch.decay_integral(t);
    const double quad = dephasing_gamma(t, 4.0, 0.0, kCanonical);
    CHECK(series == doctest::Approx(quad).epsilon(1e-5));
  }
  const double lamb_series = (16.0 - 0.0) * ch.phase_integral(0.7);
  CHECK(dephasing_lamb(0.7, 4.0, 0.0, kCanonical) ==
        doctest::Approx(lamb_series).epsilon(1e-6));
}

TEST_CASE("populations are exactly conserved") {
  const auto ch = canonical_channel();
  const Mat4 rho0 = product_state(M_PI / 3, 0.3, M_PI / 5, 1.1);
  for (double t : {0.0, 1.0, 40.0, 700.0}) {
    const Mat4 rho = ch.evolve(rho0, t);
    for (int a = 0; a < 4; ++a)
      CHECK(rho(a, a).real() == doctest::Approx(rho0(a, a).real()).epsilon(1e-14));
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(min_eigenvalue(rho) >= -1e-14);
  }
}

TEST_CASE("the degenerate coherence only rotates with the detuning") {
  const double delta = 0.02;
  const auto ch = canonical_channel(1.0 + delta);
  const Mat4 rho0 = bell_state(Bell::psi_plus);
  for (double t : {0.5, 10.0, 400.0, 1000.0}) {
    const Mat4 rho = ch.evolve(rho0, t);
    CHECK(std::abs(rho(1, 2)) == doctest::Approx(0.5).epsilon(1e-12));
    const cxd expected = rho0(1, 2) * std::exp(cxd(0.0, 2.0 * delta * t));
    CHECK(std::abs(rho(1, 2) - expected) < 1e-10);
  }
}

TEST_CASE("local coherences decay with the shared exponent") {
  const auto ch = canonical_channel();
  const Mat4 rho0 = product_state(M_PI / 4, 0.0, M_PI / 4, 0.0);
  for (double t : {1.0, 20.0, 100.0}) {
    const Mat4 rho = ch.evolve(rho0, t);
    // single-flip coherences carry Gamma = 2 * 16 * I(t)
    const double envelope = std::exp(-32.0 * ch.decay_integral(t));
    CHECK(std::abs(rho(0, 2)) == doctest::Approx(0.25 * envelope).epsilon(1e-9));
    CHECK(std::abs(rho(1, 3)) == doctest::Approx(0.25 * envelope).epsilon(1e-9));
    // the double-flip coherence decays four times faster in the exponent
    const double env2 = std::exp(-2.0 * 64.0 * ch.decay_integral(t));
    CHECK(std::abs(rho(0, 3)) == doctest::Approx(0.25 * env2).epsilon(1e-9));
  }
}

TEST_CASE("lamb phases can be switched off") {
  const auto with = canonical_channel(1.02, true);
  const auto without = canonical_channel(1.02, false);
  const Mat4 rho0 = product_state(M_PI / 4, 0.0, M_PI / 4, 0.0);
  const double t = 3.0;
  const Mat4 a = with.evolve(rho0, t);
  const Mat4 b = without.evolve(rho0, t);
  CHECK(std::abs(a(0, 2)) == doctest::Approx(std::abs(b(0, 2))).epsilon(1e-12));
  // phases differ by the lamb term L_02 = (16 - 0) K(t)
  const double dphi =
      std::arg(a(0, 2) / b(0, 2));
  CHECK(std::abs(dphi) == doctest::Approx(16.0 * with.phase_integral(t)).epsilon(1e-8));
  CHECK(with.lamb_ab(t, 0, 2) == doctest::Approx(16.0 * with.phase_integral(t)));
  CHECK(without.lamb_ab(t, 0, 2) == doctest::Approx(0.0));
}

TEST_CASE("late-time channel output approaches the asymptotic map") {
  const double delta = 0.02;
  const auto ch = canonical_channel(1.0 + delta);
  Mat4 rho0 = 0.6 * bell_state(Bell::psi_plus) + 0.4 * product_state(0.7, 0.2, 1.1, 0.9);
  const double t = 400.0;
  const Mat4 evolved = ch.evolve(rho0, t);
  const Mat4 limit = asymptotic_state(rho0, -2.0 * delta * t);
  CHECK((evolved - limit).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("asymptotic map keeps only the degenerate coherence") {
  Mat4 rho0 = bell_state(Bell::phi_plus);
  rho0 = 0.5 * rho0 + 0.5 * bell_state(Bell::psi_plus);
  const double xi = 0.77;
  const Mat4 out = asymptotic_state(rho0, xi);
  for (int a = 0; a < 4; ++a)
    CHECK(out(a, a) == rho0(a, a));
  CHECK(std::abs(out(0, 3)) == doctest::Approx(0.0));
  CHECK(std::abs(out(1, 2) - rho0(1, 2) * std::exp(cxd(0.0, -xi))) < 1e-15);
  CHECK(std::abs(out(2, 1) - rho0(2, 1) * std::exp(cxd(0.0, xi))) < 1e-15);
  CHECK((out - out.adjoint()).norm() == doctest::Approx(0.0));
}
