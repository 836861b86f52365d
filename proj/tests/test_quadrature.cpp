#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinsync/quadrature.hpp"

using namespace spinsync;

TEST_CASE("polynomials and smooth integrands converge to analytic values") {
  QuadratureSpec spec;
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

  r = integrate([](double x) { return std::exp(-x); }, 0.0, 50.0, spec);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand over many periods") {
  QuadratureSpec spec;
  spec.max_intervals = 200000;
  // int_0^{20 pi} sin(10 x) dx = 0; int_0^{20 pi} sin^2(10 x) dx = 10 pi
  auto r = integrate([](double x) { return std::sin(10 * x); }, 0.0, 20 * M_PI, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
  r = integrate([](double x) { return std::pow(std::sin(10 * x), 2); }, 0.0, 20 * M_PI, spec);
  CHECK(r.value == doctest::Approx(10 * M_PI).epsilon(1e-10));
}

TEST_CASE("integrable endpoint singularity is handled by open panels") {
  QuadratureSpec spec;
  spec.max_intervals = 200000;
  spec.rel_tol = 1e-10;
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("principal value of symmetric poles vanishes") {
  QuadratureSpec spec;
  const auto r = integrate_pv([](double) { return 1.0; }, -1.0, 1.0, 0.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  const auto r2 = integrate_pv([](double) { return 1.0; }, 0.0, 2.0, 1.0, spec);
  CHECK(r2.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("principal value with asymmetric bounds") {
  QuadratureSpec spec;
  // PV int_0^3 dx/(x - 1) = ln 2
  auto r = integrate_pv([](double) { return 1.0; }, 0.0, 3.0, 1.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  // PV int_0^2 x^2/(x - 1) dx = [x^2/2 + x + ln|x - 1|]_0^2 = 4
  r = integrate_pv([](double x) { return x * x; }, 0.0, 2.0, 1.0, spec);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("principal value of a smooth numerator") {
  QuadratureSpec spec;
  // PV int_{-2}^{2} e^x / x dx = 2 Shi(2) = 2 * 2.50156743...
  const auto r = integrate_pv([](double x) { return std::exp(x); }, -2.0, 2.0, 0.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0 * 2.501567433354976).epsilon(1e-9));
}

TEST_CASE("non-convergence is reported and require_converged raises") {
  QuadratureSpec tight;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-16;
  tight.max_intervals = 8;  // far too few panels for this oscillator
  const auto r =
      integrate([](double x) { return std::sin(100.0 * x * x); }, 0.0, 10.0, tight);
  CHECK(!r.converged);
  CHECK_THROWS_AS(require_converged(r, "test"), QuadratureError);
  try {
    require_converged(r, "test");
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error == r.error);
    CHECK(std::string(e.what()).find("test") != std::string::npos);
  }
  CHECK_NOTHROW(require_converged(integrate([](double) { return 1.0; }, 0.0, 1.0, tight),
                                  "constant"));
}

TEST_CASE("pole at the boundary of the window still integrates the outer parts") {
  QuadratureSpec spec;
  // pole close to one endpoint: PV int_0^10 dx/(x - 0.5) = ln(9.5 / 0.5)
  const auto r = integrate_pv([](double) { return 1.0; }, 0.0, 10.0, 0.5, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::log(9.5 / 0.5)).epsilon(1e-10));
}
