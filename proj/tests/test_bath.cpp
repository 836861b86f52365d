#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinsync/bath.hpp"

using namespace spinsync;
using cxd = std::complex<double>;

namespace {

const BathParams kCanonical{1e-3, 20.0, 1.0};

void check_rate(double x, cxd plus_expected, cxd minus_expected) {
  const cxd p = gamma_rate(x, RateSign::plus, kCanonical);
  const cxd m = gamma_rate(x, RateSign::minus, kCanonical);
  CHECK(p.real() == doctest::Approx(plus_expected.real()).epsilon(1e-9));
  CHECK(p.imag() == doctest::Approx(plus_expected.imag()).epsilon(1e-9));
  CHECK(m.real() == doctest::Approx(minus_expected.real()).epsilon(1e-9));
  CHECK(m.imag() == doctest::Approx(minus_expected.imag()).epsilon(1e-9));
}

}  // namespace

TEST_CASE("spectral density is Ohmic with a Lorentz-Drude cutoff") {
  CHECK(spectral_density(0.0, kCanonical) == doctest::Approx(0.0));
  CHECK(spectral_density(20.0, kCanonical) == doctest::Approx(1e-3 * 20.0 / 2.0));
  CHECK(spectral_density(1.0, kCanonical) ==
        doctest::Approx(1e-3 * 1.0 * 400.0 / 401.0).epsilon(1e-14));
  // decays like 1/w far beyond the cutoff
  CHECK(spectral_density(2000.0, kCanonical) < spectral_density(20.0, kCanonical));
}

TEST_CASE("validation accepts gamma = 0 and rejects nonphysical parameters") {
  CHECK_NOTHROW(validate_bath(BathParams{0.0, 20.0, 1.0}));
  CHECK_THROWS_AS(validate_bath(BathParams{-1e-3, 20.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath(BathParams{1e-3, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_bath(BathParams{1e-3, 20.0, 0.0}), std::invalid_argument);
  CHECK(bath_warnings(kCanonical).empty());
  CHECK(!bath_warnings(BathParams{1e-3, 5.0, 1.0}).empty());
  CHECK(!bath_warnings(BathParams{0.02, 20.0, 1.0}).empty());
}

TEST_CASE("rate coefficients at canonical parameters") {
  check_rate(0.7, {5.416568117736668e-04, -7.545110524652512e-03},
             {1.090762871229048e-03, 8.143634031208805e-03});
  check_rate(2.0, {2.434231072373968e-04, -6.976802504754738e-03},
             {1.798666995153136e-03, 8.575636374403168e-03});
  check_rate(-1.1, {1.291103455466049e-03, -8.293924986334907e-03},
             {4.297710063873189e-04, 7.366664996914588e-03});
  check_rate(0.3, {6.733186115875679e-04, -7.722929806090476e-03},
             {9.088850581563244e-04, 7.981499965159922e-03});
  check_rate(2.3, {1.986629707599314e-04, -6.853504996007659e-03},
             {1.981500717375077e-03, 8.649431931074762e-03});
}

TEST_CASE("zero-frequency limit is finite and continuous") {
  const cxd p0 = gamma_rate(0.0, RateSign::plus, kCanonical);
  const cxd m0 = gamma_rate(0.0, RateSign::minus, kCanonical);
  CHECK(p0.real() == doctest::Approx(7.853981633974483e-04).epsilon(1e-12));
  CHECK(p0.imag() == doctest::Approx(-7.853981633974485e-03).epsilon(1e-12));
  CHECK(m0.real() == doctest::Approx(7.853981633974483e-04).epsilon(1e-12));
  CHECK(m0.imag() == doctest::Approx(7.853981633974485e-03).epsilon(1e-12));
  const cxd p_eps = gamma_rate(1e-8, RateSign::plus, kCanonical);
  CHECK(std::abs(p_eps - p0) < 1e-9);
  const cxd p_meps = gamma_rate(-1e-8, RateSign::plus, kCanonical);
  CHECK(std::abs(p_meps - p0) < 1e-9);
}

TEST_CASE("conjugation symmetry links the two signs") {
  for (double x : {0.35, 1.0, 2.04, -0.6, -2.3}) {
    const cxd p = gamma_rate(-x, RateSign::plus, kCanonical);
    const cxd m = gamma_rate(x, RateSign::minus, kCanonical);
    CHECK(std::abs(m - std::conj(p)) < 1e-14);
  }
}

TEST_CASE("detailed balance fixes the rate difference to the spectral density") {
  // Re gamma_minus(x) - Re gamma_plus(x) = (pi / 4) J(x) for x > 0
  for (double x : {0.5, 1.0, 2.0, 2.04}) {
    const double diff = gamma_rate(x, RateSign::minus, kCanonical).real() -
                        gamma_rate(x, RateSign::plus, kCanonical).real();
    CHECK(diff == doctest::Approx(M_PI / 4.0 * spectral_density(x, kCanonical))
                      .epsilon(1e-9));
  }
  const double d2 = gamma_rate(2.0, RateSign::minus, kCanonical).real() -
                    gamma_rate(2.0, RateSign::plus, kCanonical).real();
  CHECK(d2 == doctest::Approx(1.5552e-3).epsilon(1e-3));
}

TEST_CASE("relaxation parts stay nonnegative either side of zero") {
  for (double x : {-2.5, -1.0, -0.1, 0.0, 0.1, 1.0, 2.5}) {
    CHECK(gamma_rate(x, RateSign::plus, kCanonical).real() >= 0.0);
    CHECK(gamma_rate(x, RateSign::minus, kCanonical).real() >= 0.0);
  }
}

TEST_CASE("rates scale linearly in gamma and vanish with it") {
  BathParams twice = kCanonical;
  twice.gamma = 2e-3;
  const cxd one = gamma_rate(1.3, RateSign::plus, kCanonical);
  const cxd two = gamma_rate(1.3, RateSign::plus, twice);
  CHECK(std::abs(two - 2.0 * one) < 1e-12);
  BathParams off = kCanonical;
  off.gamma = 0.0;
  CHECK(std::abs(gamma_rate(1.3, RateSign::plus, off)) == doctest::Approx(0.0));
  CHECK(std::abs(gamma_rate(0.0, RateSign::minus, off)) == doctest::Approx(0.0));
}

TEST_CASE("temperature drives the balance between absorption and emission") {
  BathParams cold = kCanonical;
  cold.temperature = 0.05;
  // near T = 0 absorption from the bath at positive x freezes out
  const double absorb = gamma_rate(2.0, RateSign::plus, cold).real();
  const double emit = gamma_rate(2.0, RateSign::minus, cold).real();
  CHECK(absorb < 1e-6);
  CHECK(emit > 100 * absorb);
  BathParams hot = kCanonical;
  hot.temperature = 50.0;
  const double ah = gamma_rate(2.0, RateSign::plus, hot).real();
  const double eh = gamma_rate(2.0, RateSign::minus, hot).real();
  CHECK(ah / eh == doctest::Approx(std::exp(-2.0 / 50.0)).epsilon(1e-6));
}

TEST_CASE("dephasing kernels by quadrature match their closed forms") {
  // phase kernel: (la^2 - lb^2) * (pi gamma / 2)(1 - e^{-wc t})
  const double t = 0.37;
  const double expected =
      (16.0 - 0.0) * 0.5 * M_PI * 1e-3 * (1.0 - std::exp(-20.0 * t));
  CHECK(dephasing_lamb(t, 4.0, 0.0, kCanonical) ==
        doctest::Approx(expected).epsilon(1e-6));
  // decay kernel grows monotonically from zero
  const double g1 = dephasing_gamma(0.5, 4.0, 0.0, kCanonical);
  const double g2 = dephasing_gamma(5.0, 4.0, 0.0, kCanonical);
  CHECK(g1 > 0.0);
  CHECK(g2 > g1);
  CHECK(dephasing_gamma(0.5, 2.0, 2.0, kCanonical) == doctest::Approx(0.0));
}
