#include "spinsync/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace spinsync {
namespace {

// 7-15 Gauss-Kronrod nodes on [-1,1], positive half; node 0 is the center.
constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299785,
    0.0229353220105292,
};
// Gauss-7 weights for the nodes shared with the Kronrod rule (indices 0,2,4,6).
constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const Integrand& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double s = f(mid - dx) + f(mid + dx);
    kron += kKronrodWeights[i] * s;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * s;
  }
  kron *= half;
  gauss *= half;
  return {a, b, kron, std::abs(kron - gauss)};
}

QuadResult run_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  QuadResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Panel> panels;
  panels.push(evaluate(f, a, b));
  double total = panels.top().value, err = panels.top().error;
  int n = 1;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
         n < spec.max_intervals) {
    Panel worst = panels.top();
    panels.pop();
    total -= worst.value;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const Panel& p : {evaluate(f, worst.a, mid), evaluate(f, mid, worst.b)}) {
      total += p.value;
      err += p.error;
      panels.push(p);
    }
    ++n;
  }
  res.value = total;
  res.error = std::max(err, 0.0);
  res.intervals = n;
  res.converged = err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return res;
}

void accumulate(QuadResult& acc, const QuadResult& part) {
  acc.value += part.value;
  acc.error += part.error;
  acc.intervals += part.intervals;
  acc.converged = acc.converged && part.converged;
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  return run_adaptive(f, a, b, spec);
}

QuadResult integrate_pv(const Integrand& f, double a, double b, double pole,
                        const QuadratureSpec& spec) {
  if (!(a < pole && pole < b))
    throw std::invalid_argument("integrate_pv: pole must lie strictly inside [a, b]");
  const double h = std::min(pole - a, b - pole);
  // Odd part across the pole; finite as u -> 0, and the rule never samples u=0.
  const Integrand odd = [&](double u) { return (f(pole + u) - f(pole - u)) / u; };
  QuadResult res;
  res.converged = true;
  accumulate(res, run_adaptive(odd, 0.0, h, spec));
  const Integrand plain = [&](double w) { return f(w) / (w - pole); };
  if (pole - h > a) accumulate(res, run_adaptive(plain, a, pole - h, spec));
  if (pole + h < b) accumulate(res, run_adaptive(plain, pole + h, b, spec));
  return res;
}

}  // namespace spinsync
