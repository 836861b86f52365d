// quadrature.hpp — adaptive Gauss-Kronrod integration and principal values
#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace spinsync {

// Tolerances shared by every integral in the bath layer. upper_mult sets the
// finite cutoff of semi-infinite frequency integrals as a multiple of the
// bath cutoff; the remainder is handled analytically.
struct QuadratureSpec {
  double upper_mult{50.0};
  double rel_tol{1e-8};
  double abs_tol{1e-13};
  int max_intervals{20000};
};

struct QuadResult {
  double value{0.0};
  double error{0.0};
  int intervals{0};
  bool converged{false};
};

struct QuadratureError : std::runtime_error {
  double achieved_error;
  QuadratureError(const std::string& what, double err)
      : std::runtime_error(what), achieved_error(err) {}
};

using Integrand = std::function<double(double)>;

// Adaptive 7-15 Gauss-Kronrod on [a, b]. Panel endpoints are never evaluated.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);

// Cauchy principal value of f(w)/(w - pole) over [a, b] with a < pole < b.
// The pole is removed by symmetric subtraction on the largest window that
// fits, the remainder integrated normally.
QuadResult integrate_pv(const Integrand& f, double a, double b, double pole,
                        const QuadratureSpec& spec);

// Raise QuadratureError unless r converged.
inline const QuadResult& require_converged(const QuadResult& r, const char* context) {
  if (!r.converged)
    throw QuadratureError(std::string(context) + ": quadrature did not converge, error estimate " +
                              std::to_string(r.error) + " after " + std::to_string(r.intervals) +
                              " intervals",
                          r.error);
  return r;
}

}  // namespace spinsync
