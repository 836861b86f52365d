#include "spinsync/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinsync {
namespace {

constexpr double kPi = std::numbers::pi;

Mat4 spin_flip(const Mat4& rho) {
  static const Mat4 yy = [] {
    Mat2 sy;
    sy << 0, -kI, kI, 0;
    return Mat4(kron(sy, sy));
  }();
  return yy * rho.conjugate() * yy;
}

struct Axis3 {
  double x, y, z;
};

Axis3 measurement_axis(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Average entropy of the unmeasured spin after a projective measurement along
// n(theta, phi) on the measured spin.
double conditional_entropy(const Mat4& rho, Party measured, double theta, double phi) {
  const Axis3 n = measurement_axis(theta, phi);
  Mat2 proj;
  proj << 0.5 * (1.0 + n.z), 0.5 * cxd{n.x, -n.y}, 0.5 * cxd{n.x, n.y},
      0.5 * (1.0 - n.z);
  double total = 0.0;
  for (int branch = 0; branch < 2; ++branch) {
    const Mat2 pi_b = branch == 0 ? proj : Mat2(Mat2::Identity() - proj);
    const Mat4 e = measured == Party::b ? Mat4(kron(identity2(), pi_b))
                                        : Mat4(kron(pi_b, identity2()));
    const Mat4 m = e * rho;
    const double p = m.trace().real();
    if (p < 1e-14) continue;
    const Mat2 cond_raw = partial_trace(m, measured == Party::b ? 1 : 2);
    const Mat2 cond = 0.5 * (cond_raw + cond_raw.adjoint()) / p;
    const double half_diff = 0.5 * (cond(0, 0) - cond(1, 1)).real();
    const double r = std::sqrt(half_diff * half_diff + std::norm(cond(0, 1)));
    const double lam = std::clamp(0.5 + r, 0.0, 1.0);
    total += p * binary_entropy(lam);
  }
  return total;
}

struct Optimum {
  double theta, phi, value;
};

Optimum grid_scan(const Mat4& rho, Party measured, const DiscordGrid& grid) {
  Optimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  const double dtheta = 0.5 * kPi / (grid.n_theta - 1);
  const double dphi = 2.0 * kPi / grid.n_phi;
  for (int i = 0; i < grid.n_theta; ++i) {
    const double theta = i * dtheta;
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = j * dphi;
      const double v = conditional_entropy(rho, measured, theta, phi);
      if (v < best.value) best = {theta, phi, v};
    }
  }
  return best;
}

// Nelder-Mead in the (theta, phi) plane; the objective is smooth and periodic
// so unconstrained steps are safe, angles are canonicalized afterwards.
Optimum simplex_polish(const Mat4& rho, Party measured, const Optimum& start,
                       double step_theta, double step_phi, double angle_tol) {
  struct Vertex {
    double t, p, f;
  };
  const auto eval = [&](double t, double p) {
    return conditional_entropy(rho, measured, t, p);
  };
  std::array<Vertex, 3> v{{{start.theta, start.phi, start.value},
                           {start.theta + step_theta, start.phi,
                            eval(start.theta + step_theta, start.phi)},
                           {start.theta, start.phi + step_phi,
                            eval(start.theta, start.phi + step_phi)}}};
  const auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  for (int iter = 0; iter < 300; ++iter) {
    std::sort(v.begin(), v.end(), by_f);
    const double size = std::max(std::abs(v[2].t - v[0].t) + std::abs(v[2].p - v[0].p),
                                 std::abs(v[1].t - v[0].t) + std::abs(v[1].p - v[0].p));
    if (v[2].f - v[0].f < 1e-13 && size < angle_tol) break;
    const double ct = 0.5 * (v[0].t + v[1].t), cp = 0.5 * (v[0].p + v[1].p);
    const double rt = ct + (ct - v[2].t), rp = cp + (cp - v[2].p);
    const double fr = eval(rt, rp);
    if (fr < v[0].f) {
      const double et = ct + 2.0 * (ct - v[2].t), ep = cp + 2.0 * (cp - v[2].p);
      const double fe = eval(et, ep);
      v[2] = fe < fr ? Vertex{et, ep, fe} : Vertex{rt, rp, fr};
    } else if (fr < v[1].f) {
      v[2] = {rt, rp, fr};
    } else {
      const double kt = ct + 0.5 * (v[2].t - ct), kp = cp + 0.5 * (v[2].p - cp);
      const double fk = eval(kt, kp);
      if (fk < v[2].f) {
        v[2] = {kt, kp, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i].t = v[0].t + 0.5 * (v[i].t - v[0].t);
          v[i].p = v[0].p + 0.5 * (v[i].p - v[0].p);
          v[i].f = eval(v[i].t, v[i].p);
        }
      }
    }
  }
  std::sort(v.begin(), v.end(), by_f);
  return {v[0].t, v[0].p, v[0].f};
}

// Fold arbitrary angles onto theta in [0, pi/2], phi in [0, 2pi).
void canonicalize(double& theta, double& phi) {
  Axis3 n = measurement_axis(theta, phi);
  if (n.z < 0.0) {
    n.x = -n.x;
    n.y = -n.y;
    n.z = -n.z;
  }
  const double len = std::sqrt(n.x * n.x + n.y * n.y + n.z * n.z);
  theta = std::acos(std::clamp(n.z / len, -1.0, 1.0));
  phi = std::atan2(n.y, n.x);
  if (phi < 0.0) phi += 2.0 * kPi;
  if (std::hypot(n.x, n.y) < 1e-12) phi = 0.0;
}

CorrelationValues assemble(const Mat4& rho, Party measured, const Optimum& opt) {
  const Mat2 rho_a = partial_trace(rho, 1);
  const Mat2 rho_b = partial_trace(rho, 2);
  const double s_a = von_neumann_entropy(rho_a);
  const double s_b = von_neumann_entropy(rho_b);
  const double s_ab = von_neumann_entropy(rho);
  const double s_unmeasured = measured == Party::b ? s_a : s_b;

  CorrelationValues out;
  out.concurrence = concurrence(rho);
  out.eof = eof_from_concurrence(out.concurrence);
  out.mutual_info = s_a + s_b - s_ab;
  out.classical = std::max(0.0, s_unmeasured - opt.value);
  out.discord = std::max(0.0, out.mutual_info - (s_unmeasured - opt.value));
  out.theta_opt = opt.theta;
  out.phi_opt = opt.phi;
  canonicalize(out.theta_opt, out.phi_opt);
  return out;
}

Optimum optimize(const Mat4& rho, Party measured, const DiscordGrid& grid) {
  const Optimum coarse = grid_scan(rho, measured, grid);
  const double dtheta = 0.5 * kPi / (grid.n_theta - 1);
  const double dphi = 2.0 * kPi / grid.n_phi;
  return simplex_polish(rho, measured, coarse, dtheta, dphi, grid.angle_tol);
}

}  // namespace

double concurrence(const Mat4& rho) {
  check_density_matrix(rho);
  const Mat4 prod = rho * spin_flip(rho);
  Eigen::ComplexEigenSolver<Mat4> es(prod);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("concurrence: eigensolver failed");
  std::array<double, 4> mu;
  for (int i = 0; i < 4; ++i) {
    double lam = es.eigenvalues()(i).real();
    if (lam < -1e-10)
      throw std::invalid_argument("concurrence: radicand " + std::to_string(lam) +
                                  " below -1e-10; state positivity broken");
    mu[i] = std::sqrt(std::max(lam, 0.0));
  }
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

double eof_from_concurrence(double ec) {
  if (ec < 0.0 || ec > 1.0 + 1e-12)
    throw std::invalid_argument("eof_from_concurrence: concurrence outside [0,1]");
  ec = std::min(ec, 1.0);
  return binary_entropy(0.5 * (1.0 - std::sqrt(1.0 - ec * ec)));
}

double entanglement_of_formation(const Mat4& rho) {
  return eof_from_concurrence(concurrence(rho));
}

Mat4 project_to_physical(const Mat4& rho, double floor) {
  const Mat4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(herm);
  const Eigen::Vector4d& vals = es.eigenvalues();
  if (vals(0) < -floor)
    throw std::invalid_argument("project_to_physical: eigenvalue " +
                                std::to_string(vals(0)) + " below -" +
                                std::to_string(floor));
  Eigen::Vector4d clamped = vals.cwiseMax(0.0);
  clamped /= clamped.sum();
  return es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
}

CorrelationValues discord_and_classical(const Mat4& rho, Party measured,
                                        const DiscordGrid& grid) {
  check_density_matrix(rho);
  if (grid.n_theta < 2 || grid.n_phi < 2)
    throw std::invalid_argument("discord_and_classical: grid too coarse");
  return assemble(rho, measured, optimize(rho, measured, grid));
}

CorrelationValues xstate_discord(const Mat4& rho) {
  check_density_matrix(rho);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j || (i == 1 && j == 2) || (i == 2 && j == 1)) continue;
      if (std::abs(rho(i, j)) > 1e-10)
        throw std::invalid_argument(
            "xstate_discord: state lacks the asymptotic sparsity pattern");
    }
  const Optimum z{0.0, 0.0, conditional_entropy(rho, Party::b, 0.0, 0.0)};
  const Optimum x{0.5 * kPi, 0.0, conditional_entropy(rho, Party::b, 0.5 * kPi, 0.0)};
  return assemble(rho, Party::b, x.value <= z.value ? x : z);
}

std::vector<CorrelationValues> correlation_trace(const std::vector<Mat4>& states,
                                                 Party measured, const DiscordGrid& grid,
                                                 int rescan_every, double positivity_floor) {
  std::vector<CorrelationValues> out;
  out.reserve(states.size());
  bool have_prev = false;
  Optimum prev{0.0, 0.0, 0.0};
  const double dtheta = 0.5 * kPi / (grid.n_theta - 1);
  const double dphi = 2.0 * kPi / grid.n_phi;
  for (size_t i = 0; i < states.size(); ++i) {
    const Mat4 rho = project_to_physical(states[i], positivity_floor);
    Optimum opt{0.0, 0.0, 0.0};
    const bool full = !have_prev || (rescan_every > 0 && i % rescan_every == 0);
    if (full) {
      opt = optimize(rho, measured, grid);
    } else {
      const Optimum warm_start{prev.theta, prev.phi,
                               conditional_entropy(rho, measured, prev.theta, prev.phi)};
      opt = simplex_polish(rho, measured, warm_start, dtheta, dphi, grid.angle_tol);
      // Crossover guard: canonical bases beating the tracked optimum force a re-scan.
      const double at_z = conditional_entropy(rho, measured, 0.0, 0.0);
      const double at_x = conditional_entropy(rho, measured, 0.5 * kPi, 0.0);
      if (std::min(at_z, at_x) < opt.value - 1e-9) opt = optimize(rho, measured, grid);
    }
    prev = opt;
    have_prev = true;
    out.push_back(assemble(rho, measured, opt));
  }
  return out;
}

}  // namespace spinsync
