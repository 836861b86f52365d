// redfield.hpp — Bloch-Redfield generator, spectral modes, propagation
#pragma once

#include <string>
#include <vector>

#include "spinsync/bath.hpp"
#include "spinsync/model.hpp"

namespace spinsync {

// Full (non-secular) generator for the two-spin reduced dynamics, as a 16x16
// matrix acting on states flattened row-major (a,b) -> 4a+b in the energy
// eigenbasis of the system.
struct RedfieldGenerator {
  SpinPairModel model;
  BathParams bath;
  bool include_lamb{true};
  Mat16 g_matrix;
  Mat4 gamma_plus_tbl;   // gamma_plus at each Bohr frequency w_ij
  Mat4 gamma_minus_tbl;  // gamma_minus at each Bohr frequency w_ij
};

RedfieldGenerator build_generator(const SpinPairModel& model, const BathParams& bath,
                                  const QuadratureSpec& quad = {},
                                  bool include_lamb = true);

struct GeneratorSpectrum {
  Eigen::Vector<cxd, 16> values;
  Mat16 right;  // columns r_k
  Mat16 left;   // rows, biorthogonal: left * right = I
  bool defective{false};
};

GeneratorSpectrum spectrum(const RedfieldGenerator& gen);

// Eigenvalues with |Im| below this are classified as real modes.
inline constexpr double kOscillatoryTol = 1e-9;

struct RankedMode {
  int index{-1};
  double decay_rate{0.0};  // -Re lambda
  double frequency{0.0};   // Im lambda
  double weight{0.0};      // |tr(O r_k)| * |<l_k, rho0>|
};

// Oscillatory modes (positive-frequency representatives) ranked by weight,
// descending, for one observable and one initial state, both given in the
// computational basis.
std::vector<RankedMode> rank_modes(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                                   const Mat4& observable, const Mat4& initial);

// The paper's mode-selection rule for the synchronization analysis: among the
// three slowest-decaying oscillatory modes, keep the two with the highest
// weight under either transverse observable, ordered slower first. The gap
// slow.decay_rate - fast.decay_rate is <= 0 by construction.
struct SlowModePair {
  RankedMode slow, fast;
  double gap{0.0};
  bool valid{false};
};

SlowModePair select_slow_pair(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                              const Mat4& initial);

struct GapCell {
  double delta{0.0}, g{0.0};
  double gap{0.0};
  double frequency{0.0};  // Im lambda of the slower selected mode
  bool ok{false};
  std::string error;
};

std::vector<GapCell> gap_map(const std::vector<double>& deltas, const std::vector<double>& gs,
                             const BathParams& bath, const Mat4& initial,
                             const QuadratureSpec& quad = {}, bool include_lamb = true,
                             int workers = 0);

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat4> states;  // computational basis; filled when store_states
  std::vector<double> sigma1x, sigma2x, sigma1z, sigma2z;
  std::vector<double> min_eig, trace_err;
  bool used_fallback{false};

  double worst_min_eig() const;
};

// Spectral propagation rho(t) = sum_k <l_k, rho0> e^{lambda_k t} r_k. Falls
// back to adaptive time-stepping when the spectrum is defective.
Trajectory propagate(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                     const Mat4& initial, const std::vector<double>& times,
                     bool store_states = false);

// Adaptive 4th-order stepper with local extrapolation; reference route for
// cross-checking the spectral path and the fallback for defective spectra.
Trajectory propagate_stepped(const RedfieldGenerator& gen, const Mat4& initial,
                             const std::vector<double>& times, bool store_states = false,
                             double local_tol = 1e-9);

// Transverse/longitudinal expectation values from a computational-basis state.
double expect_sigma1x(const Mat4& rho);
double expect_sigma2x(const Mat4& rho);
double expect_sigma1z(const Mat4& rho);
double expect_sigma2z(const Mat4& rho);

}  // namespace spinsync
