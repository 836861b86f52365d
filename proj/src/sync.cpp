#include "spinsync/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinsync/parallel.hpp"

namespace spinsync {

void validate_sync(const SyncConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("sync: dt must be positive");
  if (!(cfg.window >= 10.0 * cfg.dt))
    throw std::invalid_argument("sync: window must cover at least 10 sampling steps");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
    throw std::invalid_argument("sync: threshold must lie in (0, 1)");
  if (!(cfg.persistence >= 1))
    throw std::invalid_argument("sync: persistence must be >= 1");
  if (!(cfg.horizon > cfg.window))
    throw std::invalid_argument("sync: horizon must exceed the window");
  if (!(cfg.stride > 0.0)) throw std::invalid_argument("sync: stride must be positive");
}

std::vector<double> time_grid(double end, double dt) {
  const int n = std::max(1, static_cast<int>(std::ceil(end / dt - 1e-9)));
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = i * dt;
  return t;
}

std::optional<double> correlation_coefficient(const double* f, const double* g, int n,
                                              double dt) {
  if (n < 10) throw std::invalid_argument("correlation_coefficient: need at least 10 samples");
  // Trapezoid weights: half at the endpoints.
  auto wsum = [&](auto&& value) {
    double s = 0.5 * (value(0) + value(n - 1));
    for (int i = 1; i < n - 1; ++i) s += value(i);
    return s * dt;
  };
  const double total = dt * (n - 1);
  const double mf = wsum([&](int i) { return f[i]; }) / total;
  const double mg = wsum([&](int i) { return g[i]; }) / total;
  const double vf = wsum([&](int i) { return (f[i] - mf) * (f[i] - mf); });
  const double vg = wsum([&](int i) { return (g[i] - mg) * (g[i] - mg); });
  // Variance at rounding-noise level means the series is flat; a coefficient
  // computed from it would be pure noise.
  const double vf_floor = 1e-24 * std::max(1.0, mf * mf) * total;
  const double vg_floor = 1e-24 * std::max(1.0, mg * mg) * total;
  if (vf <= vf_floor || vg <= vg_floor) return std::nullopt;
  const double den = std::sqrt(vf * vg);
  const double cov = wsum([&](int i) { return (f[i] - mf) * (g[i] - mg); });
  return std::clamp(cov / den, -1.0, 1.0);
}

std::vector<CPoint> c_series(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& times, const SyncConfig& cfg) {
  validate_sync(cfg);
  if (f.size() != times.size() || g.size() != times.size())
    throw std::invalid_argument("c_series: series and time grid sizes differ");
  const int n = static_cast<int>(times.size());
  const int nwin = static_cast<int>(std::lround(cfg.window / cfg.dt));
  const int step = std::max(1, static_cast<int>(std::lround(cfg.stride / cfg.dt)));
  std::vector<CPoint> out;
  for (int i = 0; i + nwin < n; i += step) {
    CPoint p;
    p.t = times[i];
    const auto c = correlation_coefficient(&f[i], &g[i], nwin + 1, cfg.dt);
    p.defined = c.has_value();
    p.value = c.value_or(0.0);
    out.push_back(p);
  }
  return out;
}

SyncReport sync_time(const std::vector<double>& f, const std::vector<double>& g,
                     const std::vector<double>& times, const SyncConfig& cfg) {
  SyncReport rep;
  rep.series = c_series(f, g, times, cfg);
  int run = 0;
  for (size_t i = 0; i < rep.series.size(); ++i) {
    const CPoint& p = rep.series[i];
    if (!p.defined) ++rep.skipped_windows;
    if (p.defined && std::abs(p.value) >= cfg.threshold) {
      ++run;
      if (run == cfg.persistence) {
        const CPoint& first = rep.series[i + 1 - cfg.persistence];
        rep.reached = true;
        rep.t_synch = first.t;
        rep.sign = first.value >= 0.0 ? 1 : -1;
        return rep;
      }
    } else {
      run = 0;
    }
  }
  return rep;
}

FrequencyEstimate sync_frequency(const std::vector<double>& signal,
                                 const std::vector<double>& times, double t_from, int cycles) {
  if (cycles < 10) throw std::invalid_argument("sync_frequency: need at least 10 cycles");
  if (signal.size() != times.size() || signal.size() < 2)
    throw std::invalid_argument("sync_frequency: series and time grid sizes differ");
  size_t start = 0;
  while (start < times.size() && times[start] < t_from) ++start;
  if (times.size() - start < 4)
    throw std::runtime_error("sync_frequency: measurement span after t_from too short");

  double mean = 0.0;
  for (size_t i = start; i < signal.size(); ++i) mean += signal[i];
  mean /= static_cast<double>(signal.size() - start);

  std::vector<double> crossings;
  const int needed = 2 * cycles + 1;
  for (size_t i = start; i + 1 < signal.size(); ++i) {
    const double a = signal[i] - mean, b = signal[i + 1] - mean;
    if (a == 0.0 || a * b < 0.0) {
      const double dt = times[i + 1] - times[i];
      crossings.push_back(times[i] + (a == 0.0 ? 0.0 : a / (a - b) * dt));
      if (static_cast<int>(crossings.size()) == needed) break;
    }
  }
  if (static_cast<int>(crossings.size()) < needed)
    throw std::runtime_error("sync_frequency: found " + std::to_string(crossings.size()) +
                             " zero crossings, need " + std::to_string(needed));
  const double span = crossings.back() - crossings.front();
  FrequencyEstimate est;
  est.crossings = needed;
  est.value = 2.0 * std::numbers::pi * cycles / span;
  const double dt = times[1] - times[0];
  est.error = 0.5 * est.value * dt / span;
  return est;
}

std::vector<SyncCell> sync_map(const std::vector<double>& deltas,
                               const std::vector<double>& gs, const BathParams& bath,
                               const SyncConfig& cfg, const Mat4& initial,
                               const QuadratureSpec& quad, bool include_lamb, int workers) {
  validate_sync(cfg);
  if (deltas.empty() || gs.empty())
    throw std::invalid_argument("sync_map: grids must be non-empty");
  const int ng = static_cast<int>(gs.size());
  const int total = static_cast<int>(deltas.size()) * ng;
  std::vector<SyncCell> cells(total);
  const std::vector<double> times = time_grid(cfg.horizon + cfg.window, cfg.dt);
  parallel_for(total, workers, [&](int idx) {
    SyncCell& cell = cells[idx];
    cell.delta = deltas[idx / ng];
    cell.g = gs[idx % ng];
    cell.t_synch = cfg.horizon;
    try {
      const SpinPairModel model = build_model_delta(cell.delta, cell.g);
      const RedfieldGenerator gen = build_generator(model, bath, quad, include_lamb);
      const GeneratorSpectrum sp = spectrum(gen);
      const Trajectory traj = propagate(gen, sp, initial, times);
      cell.worst_min_eig = traj.worst_min_eig();
      const SyncReport rep = sync_time(traj.sigma1x, traj.sigma2x, times, cfg);
      if (rep.reached) {
        cell.reached = true;
        cell.t_synch = rep.t_synch;
        cell.sign = rep.sign;
      }
      if (!sp.defective) {
        const SlowModePair pair = select_slow_pair(gen, sp, initial);
        if (pair.valid) {
          cell.gap = pair.gap;
          cell.frequency = pair.slow.frequency;
        }
      }
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return cells;
}

}  // namespace spinsync
