// config.hpp — run configuration schema, JSON parsing, override plumbing
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinsync/bath.hpp"
#include "spinsync/correlations.hpp"
#include "spinsync/model.hpp"
#include "spinsync/quadrature.hpp"
#include "spinsync/sync.hpp"

namespace spinsync {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sweep axis, either an inclusive linspace or an explicit value list.
struct AxisSpec {
  bool is_range{true};
  double min{0.0}, max{1.25};
  int count{11};
  std::vector<double> values;

  std::vector<double> resolve() const;
};

// Evaluation times, either start/stop/step (inclusive) or explicit values.
struct TimeGridSpec {
  bool is_range{true};
  double start{0.0}, stop{800.0}, step{4.0};
  std::vector<double> values;

  std::vector<double> resolve() const;
};

struct ModelConfig {
  double omega2{1.02};
  double g{-1.0};
};

struct InitialStateConfig {
  enum class Kind { product, bell, matrix };
  Kind kind{Kind::product};
  double theta1{M_PI / 4}, phi1{0.0};
  double theta2{M_PI / 8}, phi2{M_PI / 2};
  Bell bell{Bell::psi_minus};
  std::array<cxd, 16> rho{};  // row-major, kind == matrix only
};

enum class Engine { redfield, dephasing_exact, auto_select };

struct EvolveConfig {
  double t_max{500.0};
  double dt{0.02};
};

struct CorrelationConfig {
  Party measured{Party::b};
  int n_theta{64};
  int n_phi{128};
  double angle_tol{1e-5};
  TimeGridSpec times;
  int rescan_every{20};

  DiscordGrid grid() const { return DiscordGrid{n_theta, n_phi, angle_tol}; }
};

struct SweepConfig {
  AxisSpec delta;                                     // default 0..1.25, 11 points
  AxisSpec g{true, -1.0, 1.0, 9, {}};                 // default -1..1, 9 points
};

struct PositivityConfig {
  double warn_tol{1e-7};
  double hard_cap{1e-3};
};

struct OutputConfig {
  std::string prefix{"run"};
};

struct RunConfig {
  ModelConfig model;
  BathParams bath;
  InitialStateConfig initial_state;
  Engine engine{Engine::auto_select};
  bool include_lamb_shift{true};
  QuadratureSpec quadrature;
  SyncConfig sync;
  EvolveConfig evolve;
  CorrelationConfig correlations;
  SweepConfig sweep;
  PositivityConfig positivity;
  OutputConfig output;

  Mat4 initial_density() const;
  SpinPairModel build() const { return build_model(model.omega2, model.g); }
};

RunConfig default_config();

// Serialization is lossless: config_from_json(config_to_json(c)) echoes back
// to the identical JSON document.
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Parse with line/column positions in error messages. `source` names the
// origin (file path, "recipe", "override") for the message prefix.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

// Deep-merge overlay into base. Nodes that admit alternative spellings
// (sweep axes, time grids) are replaced outright instead of key-merged.
void merge_config(nlohmann::json& base, const nlohmann::json& overlay);

// Each entry is dotted.path=json-literal; bare words fall back to strings.
void apply_overrides(nlohmann::json& base, const std::vector<std::string>& overrides);

// defaults -> optional config file -> recipe overlay -> CLI overrides.
// When effective_out is given it receives the merged JSON echo.
RunConfig assemble_config(const std::optional<std::string>& config_path,
                          const nlohmann::json& recipe_overlay,
                          const std::vector<std::string>& overrides,
                          nlohmann::json* effective_out = nullptr);

const char* engine_name(Engine e);
const char* bell_name(Bell b);

}  // namespace spinsync
