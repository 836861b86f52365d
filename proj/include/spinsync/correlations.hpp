// correlations.hpp — concurrence, entanglement of formation, discord
#pragma once

#include <vector>

#include "spinsync/operators.hpp"

namespace spinsync {

struct CorrelationValues {
  double concurrence{0.0};
  double eof{0.0};
  double mutual_info{0.0};
  double classical{0.0};
  double discord{0.0};
  double theta_opt{0.0};  // polar angle of the optimal measurement axis
  double phi_opt{0.0};
};

enum class Party { a, b };  // a = first spin, b = second spin

struct DiscordGrid {
  int n_theta{64};   // theta in [0, pi/2], endpoints included
  int n_phi{128};    // phi in [0, 2pi), endpoint excluded
  double angle_tol{1e-5};
};

// Wootters concurrence. Rejects spectra whose radicand drops below -1e-10,
// which signals broken positivity upstream.
double concurrence(const Mat4& rho);

double eof_from_concurrence(double ec);
double entanglement_of_formation(const Mat4& rho);

// Clamp small negative eigenvalues (transient positivity violations of the
// second-order master equation) and renormalize. Violations beyond `floor`
// are refused.
Mat4 project_to_physical(const Mat4& rho, double floor = 1e-3);

// Discord and classical correlations by minimizing the conditional entropy
// over orthogonal projective measurements on the measured party: coarse grid
// scan followed by a simplex polish of the best cell.
CorrelationValues discord_and_classical(const Mat4& rho, Party measured = Party::b,
                                        const DiscordGrid& grid = {});

// Closed candidate set for states with the asymptotic sparsity pattern
// (diagonal + inner anti-diagonal coherence): the optimum is attained on the
// sigma_x or sigma_z eigenbasis; evaluates both and keeps the better.
CorrelationValues xstate_discord(const Mat4& rho);

// Per-state correlation measures along a trajectory. The minimizer warm-starts
// from the previous optimum; a full grid re-scan runs every `rescan_every`
// samples and whenever the canonical measurement candidates beat the warm
// result, to catch optimal-basis crossovers.
std::vector<CorrelationValues> correlation_trace(const std::vector<Mat4>& states,
                                                 Party measured = Party::b,
                                                 const DiscordGrid& grid = {},
                                                 int rescan_every = 20,
                                                 double positivity_floor = 1e-3);

}  // namespace spinsync
