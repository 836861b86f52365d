// runner.hpp — command orchestration: trajectories, maps, CSV and manifest emission
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinsync/config.hpp"

namespace spinsync {

// Raised after outputs and manifest are written, when the propagated state
// dips below -hard_cap; the CLI maps it to its own exit code.
struct PositivityError : std::runtime_error {
  double worst_min_eig;
  PositivityError(const std::string& what, double worst)
      : std::runtime_error(what), worst_min_eig(worst) {}
};

struct RunContext {
  std::string out_dir{"."};
  int workers{0};          // 0 = hardware concurrency
  std::string command;     // recorded in the manifest
  std::string file_stem;   // exact CSV stem; empty = derive from output.prefix
  bool write_manifest{true};
};

struct RunResult {
  std::vector<std::string> outputs;  // paths written, CSVs first
  nlohmann::json manifest;
  double worst_min_eig{0.0};
};

// Engine actually used for anisotropy g under this config's engine selection.
Engine resolve_engine(const RunConfig& cfg, double g);

// trajectory CSV: t, sigma1x, sigma2x, sigma1z, sigma2z, min_eig, trace_err
RunResult cmd_evolve(const RunConfig& cfg, const RunContext& ctx);

// map CSV: delta, g, t_synch, reached, gap, im_lambda1 (row-major over the grid)
RunResult cmd_sync_map(const RunConfig& cfg, const RunContext& ctx);

// spectrum CSV: re, im, is_real_mode, weight_sigma1x, weight_sigma2x, rank,
// defective; 16 rows sorted by rank (descending mode weight)
RunResult cmd_spectrum(const RunConfig& cfg, const RunContext& ctx);

// correlations CSV: delta, t, concurrence, eof, mutual_info, classical,
// discord; one block per sweep.delta value at the configured g
RunResult cmd_correlations(const RunConfig& cfg, const RunContext& ctx);

// One step of a figure recipe: a config overlay plus the task that consumes it.
struct RecipeStep {
  std::string label;        // output stem, e.g. "fig7b"
  std::string task;         // evolve | sync-map | correlations | measure-map | discord-sync-map
  nlohmann::json overlay;   // applied on top of defaults + user config
  nlohmann::json extras;    // task knobs: measure, time, column
};

std::vector<RecipeStep> figure_recipe(const std::string& figure);
std::vector<std::string> known_figures();

RunResult cmd_reproduce(const std::string& figure, const std::optional<std::string>& config_path,
                        const std::vector<std::string>& overrides, const std::string& out_dir,
                        int workers);

// map CSV with a single measure column at a fixed evaluation time:
// delta, g, <column>. extras: {"measure": eof|discord|classical, "time": t,
// "column": name}.
RunResult run_measure_map(const RunConfig& cfg, const RunContext& ctx,
                          const nlohmann::json& extras);

// CSV: delta, g, discord, t_synch, reached. extras: {"time": t} for the
// discord evaluation instant.
RunResult run_discord_sync_map(const RunConfig& cfg, const RunContext& ctx,
                               const nlohmann::json& extras);

}  // namespace spinsync
