#include "spinsync/redfield.hpp"

#include <algorithm>
#include <cmath>

#include "spinsync/parallel.hpp"

namespace spinsync {
namespace {

void fill_observables(Trajectory& traj, const Mat4& rho) {
  traj.sigma1x.push_back(expect_sigma1x(rho));
  traj.sigma2x.push_back(expect_sigma2x(rho));
  traj.sigma1z.push_back(expect_sigma1z(rho));
  traj.sigma2z.push_back(expect_sigma2z(rho));
  traj.min_eig.push_back(min_eigenvalue(rho));
  traj.trace_err.push_back(std::abs(rho.trace() - cxd{1.0, 0.0}));
}

}  // namespace

double expect_sigma1x(const Mat4& rho) { return 2.0 * (rho(0, 2) + rho(1, 3)).real(); }
double expect_sigma2x(const Mat4& rho) { return 2.0 * (rho(0, 1) + rho(2, 3)).real(); }
double expect_sigma1z(const Mat4& rho) {
  return (rho(0, 0) + rho(1, 1) - rho(2, 2) - rho(3, 3)).real();
}
double expect_sigma2z(const Mat4& rho) {
  return (rho(0, 0) - rho(1, 1) + rho(2, 2) - rho(3, 3)).real();
}

double Trajectory::worst_min_eig() const {
  double worst = 0.0;
  for (double e : min_eig) worst = std::min(worst, e);
  return worst;
}

RedfieldGenerator build_generator(const SpinPairModel& model, const BathParams& bath,
                                  const QuadratureSpec& quad, bool include_lamb) {
  validate_bath(bath);
  RedfieldGenerator gen;
  gen.model = model;
  gen.bath = bath;
  gen.include_lamb = include_lamb;

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      cxd gp = gamma_rate(model.bohr(i, j), RateSign::plus, bath, quad);
      cxd gm = gamma_rate(model.bohr(i, j), RateSign::minus, bath, quad);
      if (!include_lamb) {
        gp = cxd{gp.real(), 0.0};
        gm = cxd{gm.real(), 0.0};
      }
      gen.gamma_plus_tbl(i, j) = gp;
      gen.gamma_minus_tbl(i, j) = gm;
    }
  }

  const Mat4& s = model.coupling_eigen;
  const Mat4& gp = gen.gamma_plus_tbl;
  const Mat4& gm = gen.gamma_minus_tbl;
  // a_sum[a][m] = sum_r S_ar S_rm gp(r, m); b_sum[n][b] = sum_r S_nr gm(n, r) S_rb
  Mat4 a_sum = Mat4::Zero(), b_sum = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m)
      for (int r = 0; r < 4; ++r) {
        a_sum(a, m) += s(a, r) * s(r, m) * gp(r, m);
        b_sum(a, m) += s(a, r) * gm(a, r) * s(r, m);
      }

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          cxd r{0.0, 0.0};
          if (b == n) r += a_sum(a, m);
          if (a == m) r += b_sum(n, b);
          r -= s(a, m) * s(n, b) * (gp(a, m) + gm(n, b));
          cxd value = -r;
          if (a == m && b == n) value -= kI * model.bohr(a, b);
          gen.g_matrix(4 * a + b, 4 * m + n) = value;
        }
  return gen;
}

GeneratorSpectrum spectrum(const RedfieldGenerator& gen) {
  const GeneralEig eig = general_eig(gen.g_matrix);
  GeneratorSpectrum sp;
  sp.values = eig.values;
  sp.right = eig.right;
  sp.defective = eig.defective;
  if (!sp.defective) sp.left = eig.left;
  return sp;
}

std::vector<RankedMode> rank_modes(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                                   const Mat4& observable, const Mat4& initial) {
  if (sp.defective)
    throw std::runtime_error("rank_modes: defective spectrum has no biorthogonal modes");
  check_density_matrix(initial);
  const Mat4 obs_e = gen.model.to_eigenbasis(observable);
  const Vec16 rho0 = flatten(gen.model.to_eigenbasis(initial));
  std::vector<RankedMode> modes;
  for (int k = 0; k < 16; ++k) {
    if (sp.values(k).imag() <= kOscillatoryTol) continue;
    RankedMode m;
    m.index = k;
    m.decay_rate = -sp.values(k).real();
    m.frequency = sp.values(k).imag();
    const Mat4 rk = unflatten(sp.right.col(k));
    const cxd amp = sp.left.row(k) * rho0;
    m.weight = std::abs((obs_e * rk).trace()) * std::abs(amp);
    modes.push_back(m);
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const RankedMode& a, const RankedMode& b) { return a.weight > b.weight; });
  return modes;
}

SlowModePair select_slow_pair(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                              const Mat4& initial) {
  SlowModePair out;
  if (sp.defective) return out;
  const std::vector<RankedMode> m1 = rank_modes(gen, sp, pauli(Axis::x, 1), initial);
  const std::vector<RankedMode> m2 = rank_modes(gen, sp, pauli(Axis::x, 2), initial);

  // Rebuild per mode index: combined weight = max over the two observables.
  struct Entry {
    int index;
    double decay, freq, weight;
  };
  std::vector<Entry> entries;
  for (const RankedMode& m : m1) {
    double w2 = 0.0;
    for (const RankedMode& o : m2)
      if (o.index == m.index) w2 = o.weight;
    entries.push_back({m.index, m.decay_rate, m.frequency, std::max(m.weight, w2)});
  }
  if (entries.size() < 2) return out;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.decay < b.decay; });
  if (entries.size() > 3) entries.resize(3);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.weight > b.weight; });
  entries.resize(2);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.decay < b.decay; });
  out.slow = {entries[0].index, entries[0].decay, entries[0].freq, entries[0].weight};
  out.fast = {entries[1].index, entries[1].decay, entries[1].freq, entries[1].weight};
  out.gap = out.slow.decay_rate - out.fast.decay_rate;
  out.valid = true;
  return out;
}

std::vector<GapCell> gap_map(const std::vector<double>& deltas, const std::vector<double>& gs,
                             const BathParams& bath, const Mat4& initial,
                             const QuadratureSpec& quad, bool include_lamb, int workers) {
  if (deltas.empty() || gs.empty())
    throw std::invalid_argument("gap_map: grids must be non-empty");
  const int nd = static_cast<int>(deltas.size()), ng = static_cast<int>(gs.size());
  std::vector<GapCell> cells(static_cast<size_t>(nd) * ng);
  parallel_for(nd * ng, workers, [&](int idx) {
    GapCell& cell = cells[idx];
    cell.delta = deltas[idx / ng];
    cell.g = gs[idx % ng];
    try {
      const SpinPairModel m = build_model_delta(cell.delta, cell.g);
      const RedfieldGenerator gen = build_generator(m, bath, quad, include_lamb);
      const GeneratorSpectrum sp = spectrum(gen);
      const SlowModePair pair = select_slow_pair(gen, sp, initial);
      if (!pair.valid) {
        cell.error = sp.defective ? "defective spectrum" : "fewer than two oscillatory modes";
        return;
      }
      cell.gap = pair.gap;
      cell.frequency = pair.slow.frequency;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return cells;
}

Trajectory propagate(const RedfieldGenerator& gen, const GeneratorSpectrum& sp,
                     const Mat4& initial, const std::vector<double>& times,
                     bool store_states) {
  check_density_matrix(initial);
  if (sp.defective) return propagate_stepped(gen, initial, times, store_states);

  Trajectory traj;
  traj.times = times;
  const Vec16 rho0 = flatten(gen.model.to_eigenbasis(initial));
  const Vec16 amps = sp.left * rho0;
  for (double t : times) {
    Vec16 phases;
    for (int k = 0; k < 16; ++k) phases(k) = amps(k) * std::exp(sp.values(k) * t);
    const Mat4 rho = gen.model.from_eigenbasis(unflatten(sp.right * phases));
    if (store_states) traj.states.push_back(rho);
    fill_observables(traj, rho);
  }
  return traj;
}

Trajectory propagate_stepped(const RedfieldGenerator& gen, const Mat4& initial,
                             const std::vector<double>& times, bool store_states,
                             double local_tol) {
  check_density_matrix(initial);
  Trajectory traj;
  traj.times = times;
  traj.used_fallback = true;

  const Mat16& g = gen.g_matrix;
  const auto rk4 = [&](const Vec16& y, double h) -> Vec16 {
    const Vec16 k1 = g * y;
    const Vec16 k2 = g * Vec16(y + 0.5 * h * k1);
    const Vec16 k3 = g * Vec16(y + 0.5 * h * k2);
    const Vec16 k4 = g * Vec16(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  Vec16 y = flatten(gen.model.to_eigenbasis(initial));
  double t = 0.0, h = 0.01;
  for (double target : times) {
    if (target < t)
      throw std::invalid_argument("propagate_stepped: times must ascend from 0");
    while (t < target) {
      const double step = std::min(h, target - t);
      const Vec16 full = rk4(y, step);
      const Vec16 half = rk4(rk4(y, 0.5 * step), 0.5 * step);
      const double err = (full - half).cwiseAbs().maxCoeff();
      if (err <= local_tol || step < 1e-12) {
        y = half + (half - full) / 15.0;  // local extrapolation to 5th order
        t += step;
      }
      const double scale = err > 0.0 ? 0.9 * std::pow(local_tol / err, 0.2) : 4.0;
      h = step * std::clamp(scale, 0.2, 4.0);
      h = std::min(h, 1.0);
    }
    const Mat4 rho = gen.model.from_eigenbasis(unflatten(y));
    if (store_states) traj.states.push_back(rho);
    fill_observables(traj, rho);
  }
  return traj;
}

}  // namespace spinsync
