#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinsync/runner.hpp"

using namespace spinsync;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("spinsync_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

RunConfig quick_evolve_config() {
  RunConfig cfg = default_config();
  cfg.evolve.t_max = 2.0;
  cfg.evolve.dt = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("evolve writes the documented trajectory file") {
  TempDir dir("evolve");
  RunConfig cfg = quick_evolve_config();
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "evolve";
  const RunResult res = cmd_evolve(cfg, ctx);

  REQUIRE(res.outputs.size() == 2);
  CHECK(fs::path(res.outputs[0]).filename() == "run_trajectory.csv");
  CHECK(fs::path(res.outputs[1]).filename() == "run_manifest.json");

  const auto rows = lines_of(slurp(res.outputs[0]));
  REQUIRE(rows.size() == 1 + 5);  // header + t = 0, 0.5, ..., 2
  CHECK(rows[0] == "t,sigma1x,sigma2x,sigma1z,sigma2z,min_eig,trace_err");
  const auto first = split_csv(rows[1]);
  REQUIRE(first.size() == 7);
  CHECK(std::stod(first[0]) == doctest::Approx(0.0));

  // rerunning produces byte-identical CSV output
  const std::string before = slurp(res.outputs[0]);
  cmd_evolve(cfg, ctx);
  CHECK(slurp(res.outputs[0]) == before);
}

TEST_CASE("manifest echoes a config that parses back to the same document") {
  TempDir dir("manifest");
  RunConfig cfg = quick_evolve_config();
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "evolve";
  const RunResult res = cmd_evolve(cfg, ctx);

  const json manifest = json::parse(slurp(res.outputs[1]));
  CHECK(manifest.at("tool").at("name") == "spinsync");
  CHECK(manifest.at("command") == "evolve");
  CHECK(manifest.at("engine") == "redfield");
  const json echoed = manifest.at("config");
  CHECK(config_to_json(config_from_json(echoed)) == echoed);

  REQUIRE(manifest.at("outputs").size() == 1);
  const json& entry = manifest.at("outputs")[0];
  CHECK(entry.at("path") == "run_trajectory.csv");
  CHECK(entry.at("rows").get<int>() == 5);
  CHECK(entry.at("sha256").get<std::string>().size() == 64);
}

TEST_CASE("engine resolution follows the anisotropy") {
  RunConfig cfg = default_config();
  CHECK(resolve_engine(cfg, -1.0) == Engine::redfield);
  CHECK(resolve_engine(cfg, 0.3) == Engine::redfield);
  CHECK(resolve_engine(cfg, 1.0) == Engine::dephasing_exact);
  cfg.engine = Engine::redfield;
  CHECK(resolve_engine(cfg, 1.0) == Engine::redfield);
}

TEST_CASE("uncoupled bath leaves the longitudinal components frozen") {
  TempDir dir("gammazero");
  RunConfig cfg = quick_evolve_config();
  cfg.bath.gamma = 0.0;
  cfg.evolve.t_max = 5.0;
  cfg.evolve.dt = 1.0;
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "evolve";
  const RunResult res = cmd_evolve(cfg, ctx);
  const auto rows = lines_of(slurp(res.outputs[0]));
  REQUIRE(rows.size() > 2);
  const double z0 = std::stod(split_csv(rows[1])[3]);
  for (size_t i = 2; i < rows.size(); ++i)
    CHECK(std::stod(split_csv(rows[i])[3]) == doctest::Approx(z0).epsilon(1e-10));
}

TEST_CASE("spectrum command ranks sixteen modes") {
  TempDir dir("spectrum");
  RunConfig cfg = default_config();
  cfg.model.omega2 = 1.15;
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "spectrum";
  const RunResult res = cmd_spectrum(cfg, ctx);
  const auto rows = lines_of(slurp(res.outputs[0]));
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "re,im,is_real_mode,weight_sigma1x,weight_sigma2x,rank,defective");

  int stationary = 0;
  bool top_rank_is_slow_pair = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto f = split_csv(rows[i]);
    REQUIRE(f.size() == 7);
    const double re = std::stod(f[0]), im = std::stod(f[1]);
    if (std::abs(re) < 1e-9 && std::abs(im) < 1e-9) ++stationary;
    if (std::stol(f[5]) == 0) {
      CHECK(std::abs(im) == doctest::Approx(1.982221729914786).epsilon(1e-6));
      top_rank_is_slow_pair = true;
    }
    CHECK(std::stol(f[6]) == 0);
  }
  CHECK(stationary == 1);
  CHECK(top_rank_is_slow_pair);
}

TEST_CASE("sync map cells arrive in row-major grid order") {
  TempDir dir("syncmap");
  RunConfig cfg = default_config();
  cfg.sweep.delta = AxisSpec{false, 0, 0, 0, {0.1, 0.9}};
  cfg.sweep.g = AxisSpec{false, 0, 0, 0, {-1.0, 0.0}};
  cfg.sync.horizon = 40.0;
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "sync-map";
  const RunResult res = cmd_sync_map(cfg, ctx);
  const auto rows = lines_of(slurp(res.outputs[0]));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "delta,g,t_synch,reached,gap,im_lambda1");
  const double expected[4][2] = {{0.1, -1.0}, {0.1, 0.0}, {0.9, -1.0}, {0.9, 0.0}};
  for (int i = 0; i < 4; ++i) {
    const auto f = split_csv(rows[1 + i]);
    REQUIRE(f.size() == 6);
    CHECK(std::stod(f[0]) == doctest::Approx(expected[i][0]));
    CHECK(std::stod(f[1]) == doctest::Approx(expected[i][1]));
    const long reached = std::stol(f[3]);
    CHECK((reached == 0 || reached == 1));
    if (reached == 0) CHECK(std::stod(f[2]) == doctest::Approx(cfg.sync.horizon));
  }
}

TEST_CASE("correlations command emits one block per detuning") {
  TempDir dir("corr");
  RunConfig cfg = default_config();
  cfg.sweep.delta = AxisSpec{false, 0, 0, 0, {0.0, 0.05}};
  cfg.correlations.times = TimeGridSpec{false, 0, 0, 0, {0.0, 40.0}};
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "correlations";
  const RunResult res = cmd_correlations(cfg, ctx);
  const auto rows = lines_of(slurp(res.outputs[0]));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "delta,t,concurrence,eof,mutual_info,classical,discord");
  CHECK(std::stod(split_csv(rows[1])[0]) == doctest::Approx(0.0));
  CHECK(std::stod(split_csv(rows[2])[0]) == doctest::Approx(0.0));
  CHECK(std::stod(split_csv(rows[3])[0]) == doctest::Approx(0.05));
  CHECK(std::stod(split_csv(rows[4])[0]) == doctest::Approx(0.05));
  // identity within each row
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto f = split_csv(rows[i]);
    const double mi = std::stod(f[4]), cl = std::stod(f[5]), d = std::stod(f[6]);
    CHECK(mi == doctest::Approx(cl + d).epsilon(1e-6));
  }
}

TEST_CASE("worker count does not change the bytes") {
  TempDir dir("workers");
  RunConfig cfg = default_config();
  cfg.sweep.delta = AxisSpec{false, 0, 0, 0, {0.05, 0.3, 0.8}};
  cfg.sweep.g = AxisSpec{false, 0, 0, 0, {-1.0, -0.5}};
  cfg.sync.horizon = 60.0;

  RunContext c1;
  c1.out_dir = (dir.path / "a").string();
  c1.workers = 1;
  c1.command = "sync-map";
  RunContext c4 = c1;
  c4.out_dir = (dir.path / "b").string();
  c4.workers = 4;
  const RunResult r1 = cmd_sync_map(cfg, c1);
  const RunResult r4 = cmd_sync_map(cfg, c4);
  CHECK(slurp(r1.outputs[0]) == slurp(r4.outputs[0]));
}

TEST_CASE("reproduce rejects unknown figures and lists known ones") {
  CHECK_THROWS_AS(cmd_reproduce("fig99", std::nullopt, {}, "/tmp", 1), ConfigError);
  const auto figs = known_figures();
  CHECK(figs.size() == 7);
  for (const auto& f : {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6", "fig7"})
    CHECK(std::find(figs.begin(), figs.end(), f) != figs.end());
}

TEST_CASE("reproduce honors grid overrides and writes one labeled file per step") {
  TempDir dir("repro");
  const RunResult res =
      cmd_reproduce("fig5", std::nullopt,
                    {"sweep.delta.count=5", "sweep.g.count=5", "sync.horizon=40"},
                    dir.path.string(), 0);

  REQUIRE(res.outputs.size() == 2);
  CHECK(fs::path(res.outputs[0]).filename() == "fig5.csv");
  CHECK(fs::path(res.outputs[1]).filename() == "fig5_manifest.json");
  const auto rows = lines_of(slurp(res.outputs[0]));
  CHECK(rows.size() == 26);  // header + 5x5 cells

  const json manifest = json::parse(slurp(res.outputs[1]));
  CHECK(manifest.at("figure") == "fig5");
  REQUIRE(manifest.at("steps").size() == 1);
  const json& step = manifest.at("steps")[0];
  CHECK(step.at("label") == "fig5");
  CHECK(step.at("config").at("sweep").at("delta").at("count").get<int>() == 5);
}

TEST_CASE("positivity breakage surfaces as the dedicated error after writing") {
  TempDir dir("posbreak");
  RunConfig cfg = quick_evolve_config();
  cfg.positivity.hard_cap = 1e-7;  // canonical run dips to -3.7e-4
  cfg.evolve.t_max = 40.0;
  cfg.evolve.dt = 0.1;
  RunContext ctx;
  ctx.out_dir = dir.path.string();
  ctx.command = "evolve";
  CHECK_THROWS_AS(cmd_evolve(cfg, ctx), PositivityError);
  // outputs exist anyway, flagged in the manifest
  CHECK(fs::exists(dir.path / "run_trajectory.csv"));
  const json manifest = json::parse(slurp(dir.path / "run_manifest.json"));
  CHECK(manifest.at("positivity").at("beyond_cap").get<bool>());
}
