#include "spinsync/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "spinsync/correlations.hpp"
#include "spinsync/csv.hpp"
#include "spinsync/dephasing.hpp"
#include "spinsync/parallel.hpp"
#include "spinsync/redfield.hpp"
#include "spinsync/sha256.hpp"
#include "spinsync/sync.hpp"
#include "spinsync/version.hpp"

namespace spinsync {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct FileRecord {
  std::string path;
  std::string sha;
  long rows{0};
};

FileRecord write_text(const std::string& dir, const std::string& name,
                      const std::string& content, long rows) {
  fs::create_directories(dir.empty() ? "." : dir);
  const fs::path p = fs::path(dir.empty() ? "." : dir) / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed: " + p.string());
  return {p.string(), sha256_hex(content), rows};
}

std::string csv_stem(const RunContext& ctx, const RunConfig& cfg, const char* suffix) {
  if (!ctx.file_stem.empty()) return ctx.file_stem;
  return cfg.output.prefix + suffix;
}

json outputs_json(const std::vector<FileRecord>& files) {
  json out = json::array();
  for (const auto& f : files)
    out.push_back({{"path", fs::path(f.path).filename().string()},
                   {"sha256", f.sha},
                   {"rows", f.rows}});
  return out;
}

json make_manifest(const RunConfig& cfg, const RunContext& ctx, const std::string& engine,
                   double wall, const std::vector<FileRecord>& files,
                   const std::vector<std::string>& warnings, double worst,
                   const json& cells) {
  json m;
  m["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  m["command"] = ctx.command;
  m["engine"] = engine;
  m["workers"] = ctx.workers;
  m["wall_time_seconds"] = wall;
  m["config"] = config_to_json(cfg);
  m["warnings"] = warnings;
  m["positivity"] = {{"worst_min_eig", worst},
                     {"beyond_warn", worst < -cfg.positivity.warn_tol},
                     {"beyond_cap", worst < -cfg.positivity.hard_cap}};
  if (!cells.is_null()) m["cells"] = cells;
  m["outputs"] = outputs_json(files);
  return m;
}

void add_positivity_warning(const RunConfig& cfg, double worst,
                            std::vector<std::string>& warnings) {
  if (worst < -cfg.positivity.warn_tol)
    warnings.push_back("transient positivity violation: min eigenvalue " + short_real(worst));
}

// Writes the manifest next to the CSVs when the context asks for one.
void finish(RunResult& rr, const RunConfig& cfg, const RunContext& ctx, json manifest) {
  rr.manifest = std::move(manifest);
  if (!ctx.write_manifest) return;
  const std::string stem = ctx.file_stem.empty() ? cfg.output.prefix : ctx.file_stem;
  const std::string text = rr.manifest.dump(2) + "\n";
  const auto rec = write_text(ctx.out_dir, stem + "_manifest.json", text, 0);
  rr.outputs.push_back(rec.path);
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct EngineRun {
  std::vector<Mat4> states;
  double worst{0.0};
  bool used_fallback{false};
};

EngineRun states_at(const RunConfig& cfg, double omega2, double g, const Mat4& rho0,
                    const std::vector<double>& times) {
  EngineRun out;
  const auto model = build_model(omega2, g);
  if (resolve_engine(cfg, g) == Engine::dephasing_exact) {
    const auto ch = make_dephasing_channel(model, cfg.bath, cfg.include_lamb_shift);
    out.states.reserve(times.size());
    for (double t : times) {
      Mat4 s = ch.evolve(rho0, t);
      out.worst = std::min(out.worst, min_eigenvalue(s));
      out.states.push_back(std::move(s));
    }
  } else {
    const auto gen = build_generator(model, cfg.bath, cfg.quadrature, cfg.include_lamb_shift);
    const auto sp = spectrum(gen);
    auto traj = propagate(gen, sp, rho0, times, true);
    out.worst = traj.worst_min_eig();
    out.used_fallback = traj.used_fallback;
    out.states = std::move(traj.states);
  }
  return out;
}

}  // namespace

Engine resolve_engine(const RunConfig& cfg, double g) {
  if (cfg.engine == Engine::auto_select)
    return g == 1.0 ? Engine::dephasing_exact : Engine::redfield;
  return cfg.engine;
}

RunResult cmd_evolve(const RunConfig& cfg, const RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto times = time_grid(cfg.evolve.t_max, cfg.evolve.dt);
  const Mat4 rho0 = cfg.initial_density();
  const Engine eng = resolve_engine(cfg, cfg.model.g);

  std::vector<double> sx1, sx2, sz1, sz2, mineig, tracee;
  bool fallback = false;
  if (eng == Engine::redfield) {
    const auto model = cfg.build();
    const auto gen = build_generator(model, cfg.bath, cfg.quadrature, cfg.include_lamb_shift);
    const auto sp = spectrum(gen);
    auto traj = propagate(gen, sp, rho0, times, false);
    sx1 = std::move(traj.sigma1x);
    sx2 = std::move(traj.sigma2x);
    sz1 = std::move(traj.sigma1z);
    sz2 = std::move(traj.sigma2z);
    mineig = std::move(traj.min_eig);
    tracee = std::move(traj.trace_err);
    fallback = traj.used_fallback;
  } else {
    const auto model = cfg.build();
    const auto ch = make_dephasing_channel(model, cfg.bath, cfg.include_lamb_shift);
    for (double t : times) {
      const Mat4 s = ch.evolve(rho0, t);
      sx1.push_back(expect_sigma1x(s));
      sx2.push_back(expect_sigma2x(s));
      sz1.push_back(expect_sigma1z(s));
      sz2.push_back(expect_sigma2z(s));
      mineig.push_back(min_eigenvalue(s));
      tracee.push_back(std::abs(s.trace() - cxd(1.0, 0.0)));
    }
  }
  double worst = 0.0;
  for (double m : mineig) worst = std::min(worst, m);

  CsvBuilder csv({"t", "sigma1x", "sigma2x", "sigma1z", "sigma2z", "min_eig", "trace_err"});
  for (size_t i = 0; i < times.size(); ++i) {
    csv.real(times[i]).real(sx1[i]).real(sx2[i]).real(sz1[i]).real(sz2[i]).real(mineig[i]).real(
        tracee[i]);
    csv.end_row();
  }
  const auto file = write_text(ctx.out_dir, csv_stem(ctx, cfg, "_trajectory") + ".csv",
                               csv.str(), static_cast<long>(times.size()));

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  if (fallback)
    warnings.push_back("defective generator spectrum: used the adaptive stepper fallback");
  add_positivity_warning(cfg, worst, warnings);

  RunResult rr;
  rr.worst_min_eig = worst;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, engine_name(eng), wall_since(t0), {file}, warnings, worst,
                       json()));
  if (worst < -cfg.positivity.hard_cap)
    throw PositivityError("positivity violation beyond hard cap: min eigenvalue " +
                              short_real(worst) + " < -" + short_real(cfg.positivity.hard_cap),
                          worst);
  return rr;
}

RunResult cmd_sync_map(const RunConfig& cfg, const RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deltas = cfg.sweep.delta.resolve();
  const auto gs = cfg.sweep.g.resolve();
  const Mat4 rho0 = cfg.initial_density();
  const auto cells = sync_map(deltas, gs, cfg.bath, cfg.sync, rho0, cfg.quadrature,
                              cfg.include_lamb_shift, ctx.workers);

  CsvBuilder csv({"delta", "g", "t_synch", "reached", "gap", "im_lambda1"});
  json jcells = json::array();
  double worst = 0.0;
  int failed = 0, beyond_cap = 0;
  for (const auto& c : cells) {
    std::string status = "ok";
    if (c.ok) {
      csv.real(c.delta).real(c.g).real(c.t_synch).integer(c.reached ? 1 : 0).real(c.gap).real(
          c.frequency);
      worst = std::min(worst, c.worst_min_eig);
      if (c.worst_min_eig < -cfg.positivity.hard_cap) {
        status = "positivity_beyond_cap";
        ++beyond_cap;
      }
    } else {
      csv.real(c.delta).real(c.g).real(kNan).integer(0).real(kNan).real(kNan);
      status = "error: " + c.error;
      ++failed;
    }
    csv.end_row();
    jcells.push_back({{"delta", c.delta}, {"g", c.g}, {"status", status}});
  }
  const auto file = write_text(ctx.out_dir, csv_stem(ctx, cfg, "_map") + ".csv", csv.str(),
                               static_cast<long>(cells.size()));

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  if (failed) warnings.push_back(std::to_string(failed) + " map cells failed");
  if (beyond_cap)
    warnings.push_back(std::to_string(beyond_cap) + " map cells beyond the positivity hard cap");
  add_positivity_warning(cfg, worst, warnings);

  RunResult rr;
  rr.worst_min_eig = worst;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, engine_name(cfg.engine), wall_since(t0), {file}, warnings,
                       worst, jcells));
  return rr;
}

RunResult cmd_spectrum(const RunConfig& cfg, const RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = cfg.build();
  const auto gen = build_generator(model, cfg.bath, cfg.quadrature, cfg.include_lamb_shift);
  const auto sp = spectrum(gen);
  const Mat4 rho0 = cfg.initial_density();

  std::array<double, 16> w1{}, w2{};
  std::array<int, 16> rank{};
  if (!sp.defective) {
    const Mat4 o1e = model.to_eigenbasis(pauli(Axis::x, 1));
    const Mat4 o2e = model.to_eigenbasis(pauli(Axis::x, 2));
    const Vec16 coeffs = sp.left * flatten(model.to_eigenbasis(rho0));
    for (int k = 0; k < 16; ++k) {
      const Vec16 col = sp.right.col(k);
      const Mat4 rk = unflatten(col);
      const double amp = std::abs(coeffs(k));
      w1[k] = std::abs((o1e * rk).trace()) * amp;
      w2[k] = std::abs((o2e * rk).trace()) * amp;
    }
    std::array<int, 16> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::max(w1[a], w2[a]) > std::max(w1[b], w2[b]);
    });
    for (int pos = 0; pos < 16; ++pos) rank[order[pos]] = pos;
  }

  CsvBuilder csv(
      {"re", "im", "is_real_mode", "weight_sigma1x", "weight_sigma2x", "rank", "defective"});
  std::array<int, 16> row_order{};
  std::iota(row_order.begin(), row_order.end(), 0);
  if (!sp.defective)
    std::stable_sort(row_order.begin(), row_order.end(),
                     [&](int a, int b) { return rank[a] < rank[b]; });
  for (int pos = 0; pos < 16; ++pos) {
    const int k = row_order[pos];
    const cxd lam = sp.values(k);
    csv.real(lam.real()).real(lam.imag());
    csv.integer(std::abs(lam.imag()) <= kOscillatoryTol ? 1 : 0);
    if (sp.defective)
      csv.real(kNan).real(kNan).integer(-1).integer(1);
    else
      csv.real(w1[k]).real(w2[k]).integer(rank[k]).integer(0);
    csv.end_row();
  }
  const auto file =
      write_text(ctx.out_dir, csv_stem(ctx, cfg, "_spectrum") + ".csv", csv.str(), 16);

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  if (sp.defective)
    warnings.push_back("generator spectrum is defective: mode weights unavailable");

  RunResult rr;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, "redfield", wall_since(t0), {file}, warnings, 0.0, json()));
  return rr;
}

RunResult cmd_correlations(const RunConfig& cfg, const RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deltas = cfg.sweep.delta.resolve();
  const auto times = cfg.correlations.times.resolve();
  const Mat4 rho0 = cfg.initial_density();
  const Engine eng = resolve_engine(cfg, cfg.model.g);

  std::vector<std::vector<CorrelationValues>> vals(deltas.size());
  std::vector<double> worst_per(deltas.size(), 0.0);
  parallel_for(deltas.size(), ctx.workers, [&](size_t i) {
    const auto run = states_at(cfg, 1.0 + deltas[i], cfg.model.g, rho0, times);
    worst_per[i] = run.worst;
    if (run.worst < -cfg.positivity.hard_cap)
      throw PositivityError("positivity violation beyond hard cap at delta=" +
                                short_real(deltas[i]) + ": min eigenvalue " +
                                short_real(run.worst),
                            run.worst);
    vals[i] = correlation_trace(run.states, cfg.correlations.measured, cfg.correlations.grid(),
                                cfg.correlations.rescan_every, cfg.positivity.hard_cap);
  });
  const double worst = *std::min_element(worst_per.begin(), worst_per.end());

  CsvBuilder csv({"delta", "t", "concurrence", "eof", "mutual_info", "classical", "discord"});
  for (size_t i = 0; i < deltas.size(); ++i)
    for (size_t k = 0; k < times.size(); ++k) {
      const auto& v = vals[i][k];
      csv.real(deltas[i]).real(times[k]).real(v.concurrence).real(v.eof).real(v.mutual_info)
          .real(v.classical).real(v.discord);
      csv.end_row();
    }
  const auto file = write_text(ctx.out_dir, csv_stem(ctx, cfg, "_correlations") + ".csv",
                               csv.str(), static_cast<long>(deltas.size() * times.size()));

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  add_positivity_warning(cfg, worst, warnings);

  RunResult rr;
  rr.worst_min_eig = worst;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, engine_name(eng), wall_since(t0), {file}, warnings, worst,
                       json()));
  return rr;
}

RunResult run_measure_map(const RunConfig& cfg, const RunContext& ctx, const json& extras) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string measure = extras.at("measure").get<std::string>();
  const double tval = extras.at("time").get<double>();
  const std::string column = extras.value("column", measure);
  if (measure != "eof" && measure != "discord" && measure != "classical")
    throw ConfigError("measure-map: unknown measure " + measure);

  const auto deltas = cfg.sweep.delta.resolve();
  const auto gs = cfg.sweep.g.resolve();
  const Mat4 rho0 = cfg.initial_density();

  struct MCell {
    double delta{0.0}, g{0.0}, value{kNan}, min_eig{0.0};
    bool ok{false};
    std::string error;
  };
  std::vector<MCell> cells(deltas.size() * gs.size());
  parallel_for(cells.size(), ctx.workers, [&](size_t idx) {
    MCell c;
    c.delta = deltas[idx / gs.size()];
    c.g = gs[idx % gs.size()];
    try {
      const auto run = states_at(cfg, 1.0 + c.delta, c.g, rho0, {tval});
      c.min_eig = run.worst;
      const Mat4 proj = project_to_physical(run.states.at(0), cfg.positivity.hard_cap);
      if (measure == "eof") {
        c.value = entanglement_of_formation(proj);
      } else {
        const auto v =
            discord_and_classical(proj, cfg.correlations.measured, cfg.correlations.grid());
        c.value = measure == "discord" ? v.discord : v.classical;
      }
      c.ok = true;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    cells[idx] = c;
  });

  CsvBuilder csv({"delta", "g", column});
  json jcells = json::array();
  double worst = 0.0;
  int failed = 0;
  for (const auto& c : cells) {
    csv.real(c.delta).real(c.g).real(c.value);
    csv.end_row();
    std::string status = c.ok ? "ok" : "error: " + c.error;
    if (c.ok && c.min_eig < -cfg.positivity.hard_cap) status = "positivity_beyond_cap";
    if (!c.ok) ++failed;
    worst = std::min(worst, c.min_eig);
    jcells.push_back({{"delta", c.delta}, {"g", c.g}, {"status", status}});
  }
  const auto file = write_text(ctx.out_dir, csv_stem(ctx, cfg, "_map") + ".csv", csv.str(),
                               static_cast<long>(cells.size()));

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  if (failed) warnings.push_back(std::to_string(failed) + " map cells failed");
  add_positivity_warning(cfg, worst, warnings);

  RunResult rr;
  rr.worst_min_eig = worst;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, engine_name(cfg.engine), wall_since(t0), {file}, warnings,
                       worst, jcells));
  return rr;
}

RunResult run_discord_sync_map(const RunConfig& cfg, const RunContext& ctx, const json& extras) {
  const auto t0 = std::chrono::steady_clock::now();
  const double tval = extras.at("time").get<double>();
  const auto deltas = cfg.sweep.delta.resolve();
  const auto gs = cfg.sweep.g.resolve();
  const Mat4 rho0 = cfg.initial_density();
  const auto grid = time_grid(cfg.sync.horizon + cfg.sync.window, cfg.sync.dt);

  struct DCell {
    double delta{0.0}, g{0.0}, discord{kNan}, t_synch{kNan};
    int reached{0};
    double min_eig{0.0};
    bool ok{false};
    std::string error;
  };
  std::vector<DCell> cells(deltas.size() * gs.size());
  parallel_for(cells.size(), ctx.workers, [&](size_t idx) {
    DCell c;
    c.delta = deltas[idx / gs.size()];
    c.g = gs[idx % gs.size()];
    try {
      Mat4 state_at_t;
      if (resolve_engine(cfg, c.g) == Engine::redfield) {
        const auto model = build_model_delta(c.delta, c.g);
        const auto gen =
            build_generator(model, cfg.bath, cfg.quadrature, cfg.include_lamb_shift);
        const auto sp = spectrum(gen);
        auto traj = propagate(gen, sp, rho0, grid, false);
        c.min_eig = traj.worst_min_eig();
        const auto rep = sync_time(traj.sigma1x, traj.sigma2x, grid, cfg.sync);
        c.reached = rep.reached ? 1 : 0;
        c.t_synch = rep.reached ? rep.t_synch : cfg.sync.horizon;
        auto one = propagate(gen, sp, rho0, {tval}, true);
        state_at_t = one.states.at(0);
        c.min_eig = std::min(c.min_eig, one.worst_min_eig());
      } else {
        const auto model = build_model_delta(c.delta, c.g);
        const auto ch = make_dephasing_channel(model, cfg.bath, cfg.include_lamb_shift);
        std::vector<double> f(grid.size()), h(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) {
          const Mat4 s = ch.evolve(rho0, grid[i]);
          f[i] = expect_sigma1x(s);
          h[i] = expect_sigma2x(s);
        }
        const auto rep = sync_time(f, h, grid, cfg.sync);
        c.reached = rep.reached ? 1 : 0;
        c.t_synch = rep.reached ? rep.t_synch : cfg.sync.horizon;
        state_at_t = ch.evolve(rho0, tval);
        c.min_eig = min_eigenvalue(state_at_t);
      }
      const Mat4 proj = project_to_physical(state_at_t, cfg.positivity.hard_cap);
      c.discord =
          discord_and_classical(proj, cfg.correlations.measured, cfg.correlations.grid())
              .discord;
      c.ok = true;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    cells[idx] = c;
  });

  CsvBuilder csv({"delta", "g", "discord", "t_synch", "reached"});
  json jcells = json::array();
  double worst = 0.0;
  int failed = 0;
  for (const auto& c : cells) {
    csv.real(c.delta).real(c.g).real(c.discord).real(c.t_synch).integer(c.reached);
    csv.end_row();
    std::string status = c.ok ? "ok" : "error: " + c.error;
    if (c.ok && c.min_eig < -cfg.positivity.hard_cap) status = "positivity_beyond_cap";
    if (!c.ok) ++failed;
    worst = std::min(worst, c.min_eig);
    jcells.push_back({{"delta", c.delta}, {"g", c.g}, {"status", status}});
  }
  const auto file = write_text(ctx.out_dir, csv_stem(ctx, cfg, "_map") + ".csv", csv.str(),
                               static_cast<long>(cells.size()));

  std::vector<std::string> warnings = bath_warnings(cfg.bath);
  if (failed) warnings.push_back(std::to_string(failed) + " map cells failed");
  add_positivity_warning(cfg, worst, warnings);

  RunResult rr;
  rr.worst_min_eig = worst;
  rr.outputs.push_back(file.path);
  finish(rr, cfg, ctx,
         make_manifest(cfg, ctx, engine_name(cfg.engine), wall_since(t0), {file}, warnings,
                       worst, jcells));
  return rr;
}

namespace {

json product_overlay(double t1, double p1, double t2, double p2) {
  json s;
  s["kind"] = "product";
  s["theta1"] = t1;
  s["phi1"] = p1;
  s["theta2"] = t2;
  s["phi2"] = p2;
  return s;
}

json bell_overlay(const char* which) {
  json s;
  s["kind"] = "bell";
  s["which"] = which;
  return s;
}

json range_axis(double lo, double hi, int count) {
  json a;
  a["min"] = lo;
  a["max"] = hi;
  a["count"] = count;
  return a;
}

json value_axis(const std::vector<double>& values) {
  json a;
  a["values"] = values;
  return a;
}

json times_range(double start, double stop, double step) {
  json t;
  t["start"] = start;
  t["stop"] = stop;
  t["step"] = step;
  return t;
}

}  // namespace

std::vector<std::string> known_figures() {
  return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

std::vector<RecipeStep> figure_recipe(const std::string& figure) {
  const double pi = M_PI;
  std::vector<RecipeStep> steps;
  if (figure == "fig2a") {
    json o;
    o["model"]["g"] = -1.0;
    o["initial_state"] = product_overlay(pi / 3.2, 0.0, pi / 3, 0.0);
    o["sweep"]["delta"] = value_axis({0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.05, 0.075,
                                      0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 1.25});
    o["correlations"]["times"] = times_range(0.0, 800.0, 4.0);
    o["output"]["prefix"] = "fig2a";
    steps.push_back({"fig2a", "correlations", o, json()});
  } else if (figure == "fig2b") {
    const std::vector<double> dvals = {0.0, 0.01, 0.05, 0.25};
    struct Panel {
      const char* label;
      double t1, t2;
    };
    for (const Panel& p : {Panel{"fig2b_a", pi / 3.2, pi / 3}, Panel{"fig2b_b", pi / 4, pi / 8}}) {
      json o;
      o["model"]["g"] = 1.0;
      o["initial_state"] = product_overlay(p.t1, 0.0, p.t2, 0.0);
      o["sweep"]["delta"] = value_axis(dvals);
      o["correlations"]["times"] = times_range(0.0, 800.0, 4.0);
      o["output"]["prefix"] = p.label;
      steps.push_back({p.label, "correlations", o, json()});
    }
  } else if (figure == "fig3") {
    json o;
    o["initial_state"] = bell_overlay("psi_minus");
    o["sweep"]["delta"] = range_axis(0.0, 0.25, 26);
    o["sweep"]["g"] = range_axis(-1.0, 1.0, 21);
    o["output"]["prefix"] = "fig3";
    json x;
    x["measure"] = "eof";
    x["time"] = 100.0;
    x["column"] = "eof";
    steps.push_back({"fig3", "measure-map", o, x});
  } else if (figure == "fig4") {
    json o;
    o["model"]["omega2"] = 1.02;
    o["model"]["g"] = -1.0;
    o["initial_state"] = product_overlay(pi / 4, 0.0, pi / 8, pi / 2);
    o["evolve"]["t_max"] = 500.0;
    o["evolve"]["dt"] = 0.02;
    o["output"]["prefix"] = "fig4";
    steps.push_back({"fig4", "evolve", o, json()});
  } else if (figure == "fig5") {
    json o;
    o["initial_state"] = product_overlay(pi / 4, 0.0, pi / 8, pi / 2);
    o["sweep"]["delta"] = range_axis(0.0, 1.25, 26);
    o["sweep"]["g"] = range_axis(-1.0, 1.0, 21);
    o["output"]["prefix"] = "fig5";
    steps.push_back({"fig5", "sync-map", o, json()});
  } else if (figure == "fig6") {
    json o;
    o["initial_state"] = product_overlay(pi / 4, 0.0, pi / 4, 0.0);
    std::vector<double> dvals;
    for (int i = 1; i <= 20; ++i) dvals.push_back(0.005 * i);
    o["sweep"]["delta"] = value_axis(dvals);
    o["sweep"]["g"] = value_axis({-1.0, -0.8});
    o["output"]["prefix"] = "fig6";
    json x;
    x["time"] = 300.0;
    steps.push_back({"fig6", "discord-sync-map", o, x});
  } else if (figure == "fig7") {
    const std::vector<double> dvals = {0.0, 0.005, 0.01, 0.015, 0.02, 0.025};
    struct Panel {
      const char* label;
      const char* measure;
    };
    const Panel panels[] = {{"fig7a", "discord"},
                            {"fig7b", "discord"},
                            {"fig7c", "discord"},
                            {"fig7d", "classical"}};
    for (int i = 0; i < 4; ++i) {
      json o;
      if (i == 0)
        o["initial_state"] = product_overlay(pi / 4, 0.0, pi / 8, 0.0);
      else if (i == 1)
        o["initial_state"] = bell_overlay("phi_plus");
      else
        o["initial_state"] = bell_overlay("psi_minus");
      o["sweep"]["delta"] = value_axis(dvals);
      o["sweep"]["g"] = range_axis(-1.0, 1.0, 21);
      o["output"]["prefix"] = panels[i].label;
      json x;
      x["measure"] = panels[i].measure;
      x["time"] = 800.0;
      x["column"] = panels[i].measure;
      steps.push_back({panels[i].label, "measure-map", o, x});
    }
  } else {
    throw ConfigError("unknown figure: " + figure +
                      " (expected fig2a, fig2b, fig3, fig4, fig5, fig6, or fig7)");
  }
  return steps;
}

RunResult cmd_reproduce(const std::string& figure, const std::optional<std::string>& config_path,
                        const std::vector<std::string>& overrides, const std::string& out_dir,
                        int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto steps = figure_recipe(figure);

  RunResult total;
  json jsteps = json::array();
  json all_outputs = json::array();
  for (const auto& st : steps) {
    const RunConfig cfg = assemble_config(config_path, st.overlay, overrides);
    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.workers = workers;
    ctx.command = "reproduce " + figure;
    ctx.file_stem = st.label;
    ctx.write_manifest = false;
    RunResult r;
    if (st.task == "evolve")
      r = cmd_evolve(cfg, ctx);
    else if (st.task == "sync-map")
      r = cmd_sync_map(cfg, ctx);
    else if (st.task == "correlations")
      r = cmd_correlations(cfg, ctx);
    else if (st.task == "measure-map")
      r = run_measure_map(cfg, ctx, st.extras);
    else if (st.task == "discord-sync-map")
      r = run_discord_sync_map(cfg, ctx, st.extras);
    else
      throw ConfigError("unknown recipe task: " + st.task);
    total.outputs.insert(total.outputs.end(), r.outputs.begin(), r.outputs.end());
    total.worst_min_eig = std::min(total.worst_min_eig, r.worst_min_eig);
    json sm = r.manifest;
    sm.erase("tool");
    sm.erase("command");
    sm.erase("workers");
    sm.erase("wall_time_seconds");
    sm["label"] = st.label;
    for (const auto& o : r.manifest.at("outputs")) all_outputs.push_back(o);
    jsteps.push_back(std::move(sm));
  }

  json m;
  m["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  m["command"] = "reproduce " + figure;
  m["figure"] = figure;
  m["workers"] = workers;
  m["wall_time_seconds"] = wall_since(t0);
  m["steps"] = jsteps;
  m["outputs"] = all_outputs;
  const auto rec = write_text(out_dir, figure + "_manifest.json", m.dump(2) + "\n", 0);
  total.outputs.push_back(rec.path);
  total.manifest = std::move(m);
  return total;
}

}  // namespace spinsync
