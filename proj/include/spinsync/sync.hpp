// sync.hpp — windowed correlation analytics and synchronization maps
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinsync/redfield.hpp"

namespace spinsync {

struct SyncConfig {
  double window{6.0};     // averaging window, units 1/omega1
  double stride{4.0};     // spacing of window start times
  double dt{0.02};        // trajectory sampling step
  double threshold{0.92};  // |C| level
  int persistence{12};    // consecutive windows required above threshold
  double horizon{500.0};  // last window start time
};

void validate_sync(const SyncConfig& cfg);

// Pearson correlation of two windowed series with trapezoidal time averages.
// Absent when either series has zero variance over the window.
std::optional<double> correlation_coefficient(const double* f, const double* g, int n,
                                              double dt);

struct CPoint {
  double t{0.0};
  double value{0.0};
  bool defined{false};
};

// C(t) sampled at window starts t = 0, stride, 2*stride, ... while the full
// window still fits inside the series.
std::vector<CPoint> c_series(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& times, const SyncConfig& cfg);

struct SyncReport {
  std::vector<CPoint> series;
  bool reached{false};
  double t_synch{0.0};  // start of the first persistent above-threshold run
  int sign{0};          // sign of C at that window; +1 in-phase, -1 anti-phase
  int skipped_windows{0};
};

SyncReport sync_time(const std::vector<double>& f, const std::vector<double>& g,
                     const std::vector<double>& times, const SyncConfig& cfg);

struct FrequencyEstimate {
  double value{0.0};
  double error{0.0};
  int crossings{0};
};

// Oscillation frequency from zero crossings of the detrended signal, measured
// over `cycles` full cycles starting at the first crossing past t_from. The
// error is half the discretization bound of the measured span.
FrequencyEstimate sync_frequency(const std::vector<double>& signal,
                                 const std::vector<double>& times, double t_from, int cycles);

struct SyncCell {
  double delta{0.0}, g{0.0};
  double t_synch{0.0};  // horizon sentinel when not reached
  bool reached{false};
  int sign{0};
  double gap{0.0};        // slow minus fast decay rate, <= 0
  double frequency{0.0};  // Im lambda of the slower selected mode
  double worst_min_eig{0.0};
  bool ok{false};
  std::string error;
};

// Propagate + sync_time per (delta, g) cell; deterministic for any worker
// count. The trajectory extends one window past the horizon so the window
// starting at the horizon itself is evaluated.
std::vector<SyncCell> sync_map(const std::vector<double>& deltas,
                               const std::vector<double>& gs, const BathParams& bath,
                               const SyncConfig& cfg, const Mat4& initial,
                               const QuadratureSpec& quad = {}, bool include_lamb = true,
                               int workers = 0);

// Uniform grid 0, dt, ..., spanning at least `end`.
std::vector<double> time_grid(double end, double dt);

}  // namespace spinsync
