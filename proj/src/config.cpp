#include "spinsync/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace spinsync {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config: " + path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(join(path, it.key()), "unknown key");
  }
}

double get_num(const json& obj, const char* key, double fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const char* key, const std::string& fallback,
                    const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> parse_number_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

AxisSpec parse_axis(const json& j, const std::string& path, const AxisSpec& fallback) {
  AxisSpec a = fallback;
  if (j.is_array()) {
    a.is_range = false;
    a.values = parse_number_array(j, path);
    return a;
  }
  expect_object(j, path);
  check_keys(j, path, {"min", "max", "count", "values"});
  if (j.contains("values")) {
    if (j.contains("min") || j.contains("max") || j.contains("count"))
      fail(path, "give either values or min/max/count, not both");
    a.is_range = false;
    a.values = parse_number_array(j.at("values"), path + ".values");
    return a;
  }
  a.is_range = true;
  a.values.clear();
  a.min = get_num(j, "min", a.min, path);
  a.max = get_num(j, "max", a.max, path);
  a.count = get_int(j, "count", a.count, path);
  return a;
}

TimeGridSpec parse_times(const json& j, const std::string& path, const TimeGridSpec& fallback) {
  TimeGridSpec t = fallback;
  if (j.is_array()) {
    t.is_range = false;
    t.values = parse_number_array(j, path);
    return t;
  }
  expect_object(j, path);
  check_keys(j, path, {"start", "stop", "step", "values"});
  if (j.contains("values")) {
    if (j.contains("start") || j.contains("stop") || j.contains("step"))
      fail(path, "give either values or start/stop/step, not both");
    t.is_range = false;
    t.values = parse_number_array(j.at("values"), path + ".values");
    return t;
  }
  t.is_range = true;
  t.values.clear();
  t.start = get_num(j, "start", t.start, path);
  t.stop = get_num(j, "stop", t.stop, path);
  t.step = get_num(j, "step", t.step, path);
  return t;
}

const char* kind_name(InitialStateConfig::Kind k) {
  switch (k) {
    case InitialStateConfig::Kind::product: return "product";
    case InitialStateConfig::Kind::bell: return "bell";
    case InitialStateConfig::Kind::matrix: return "matrix";
  }
  return "product";
}

InitialStateConfig parse_state(const json& j, const std::string& path,
                               const InitialStateConfig& fallback) {
  expect_object(j, path);
  check_keys(j, path, {"kind", "theta1", "phi1", "theta2", "phi2", "which", "rho"});
  InitialStateConfig s = fallback;
  const std::string kind = get_str(j, "kind", kind_name(s.kind), path);
  if (kind == "product")
    s.kind = InitialStateConfig::Kind::product;
  else if (kind == "bell")
    s.kind = InitialStateConfig::Kind::bell;
  else if (kind == "matrix")
    s.kind = InitialStateConfig::Kind::matrix;
  else
    fail(path + ".kind", "must be product, bell, or matrix");
  s.theta1 = get_num(j, "theta1", s.theta1, path);
  s.phi1 = get_num(j, "phi1", s.phi1, path);
  s.theta2 = get_num(j, "theta2", s.theta2, path);
  s.phi2 = get_num(j, "phi2", s.phi2, path);
  if (j.contains("which")) {
    const std::string w = get_str(j, "which", "", path);
    if (w == "psi_minus")
      s.bell = Bell::psi_minus;
    else if (w == "psi_plus")
      s.bell = Bell::psi_plus;
    else if (w == "phi_plus")
      s.bell = Bell::phi_plus;
    else
      fail(path + ".which", "must be psi_minus, psi_plus, or phi_plus");
  }
  if (j.contains("rho")) {
    const json& m = j.at("rho");
    if (!m.is_array() || m.size() != 4) fail(path + ".rho", "expected a 4x4 matrix");
    for (int a = 0; a < 4; ++a) {
      const json& row = m[a];
      if (!row.is_array() || row.size() != 4)
        fail(path + ".rho[" + std::to_string(a) + "]", "expected a row of 4 entries");
      for (int b = 0; b < 4; ++b) {
        const json& e = row[b];
        const std::string epath =
            path + ".rho[" + std::to_string(a) + "][" + std::to_string(b) + "]";
        if (e.is_number()) {
          s.rho[4 * a + b] = cxd(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
          s.rho[4 * a + b] = cxd(e[0].get<double>(), e[1].get<double>());
        } else {
          fail(epath, "expected a number or an [re, im] pair");
        }
      }
    }
  } else if (s.kind == InitialStateConfig::Kind::matrix &&
             fallback.kind != InitialStateConfig::Kind::matrix) {
    fail(path, "kind=matrix requires rho");
  }
  return s;
}

void wrap_validate(const std::function<void()>& f, const std::string& path) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void validate_config(const RunConfig& c) {
  if (!(c.model.omega2 > 0.0)) fail("model.omega2", "must be positive");
  if (!(c.model.g >= -1.0 && c.model.g <= 1.0)) fail("model.g", "must lie in [-1, 1]");
  wrap_validate([&] { validate_bath(c.bath); }, "bath");
  if (!(c.quadrature.upper_mult > 0.0)) fail("quadrature.upper_mult", "must be positive");
  if (!(c.quadrature.rel_tol > 0.0)) fail("quadrature.rel_tol", "must be positive");
  if (!(c.quadrature.abs_tol >= 0.0)) fail("quadrature.abs_tol", "must be >= 0");
  if (c.quadrature.max_intervals < 100) fail("quadrature.max_intervals", "must be >= 100");
  wrap_validate([&] { validate_sync(c.sync); }, "sync");
  if (!(c.evolve.dt > 0.0)) fail("evolve.dt", "must be positive");
  if (!(c.evolve.t_max >= c.evolve.dt)) fail("evolve.t_max", "must be >= dt");
  if (c.correlations.n_theta < 2) fail("correlations.n_theta", "must be >= 2");
  if (c.correlations.n_phi < 4) fail("correlations.n_phi", "must be >= 4");
  if (!(c.correlations.angle_tol > 0.0)) fail("correlations.angle_tol", "must be positive");
  if (c.correlations.rescan_every < 1) fail("correlations.rescan_every", "must be >= 1");
  const std::vector<double> times = c.correlations.times.resolve();
  if (times.empty()) fail("correlations.times", "resolves to no evaluation times");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] < times[i]) fail("correlations.times", "must be nondecreasing");
  if (times.front() < 0.0) fail("correlations.times", "must be nonnegative");
  if (c.sweep.delta.resolve().empty()) fail("sweep.delta", "resolves to no values");
  if (c.sweep.g.resolve().empty()) fail("sweep.g", "resolves to no values");
  for (double gv : c.sweep.g.resolve())
    if (gv < -1.0 || gv > 1.0) fail("sweep.g", "values must lie in [-1, 1]");
  if (!(c.positivity.warn_tol > 0.0)) fail("positivity.warn_tol", "must be positive");
  if (!(c.positivity.hard_cap >= c.positivity.warn_tol))
    fail("positivity.hard_cap", "must be >= warn_tol");
  if (c.output.prefix.empty()) fail("output.prefix", "must not be empty");
  if (c.output.prefix.find('/') != std::string::npos)
    fail("output.prefix", "must be a bare file stem, not a path");
  if (c.engine == Engine::dephasing_exact && c.model.g != 1.0)
    fail("engine", "dephasing-exact requires model.g = 1");
}

json axis_to_json(const AxisSpec& a) {
  if (a.is_range) return json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
  return json{{"values", a.values}};
}

json times_to_json(const TimeGridSpec& t) {
  if (t.is_range) return json{{"start", t.start}, {"stop", t.stop}, {"step", t.step}};
  return json(t.values);
}

bool replaces_whole(const std::string& path) {
  return path == "correlations.times" || path == "sweep.delta" || path == "sweep.g";
}

void merge_into(json& base, const json& overlay, const std::string& path) {
  if (!overlay.is_object() || !base.is_object() || replaces_whole(path)) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()))
      merge_into(base[it.key()], it.value(), join(path, it.key()));
    else
      base[it.key()] = it.value();
  }
}

}  // namespace

std::vector<double> AxisSpec::resolve() const {
  if (!is_range) return values;
  if (count < 1) throw ConfigError("config: axis count must be >= 1");
  std::vector<double> out(static_cast<size_t>(count));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = min + (max - min) * i / (count - 1);
  return out;
}

std::vector<double> TimeGridSpec::resolve() const {
  if (!is_range) return values;
  if (!(step > 0.0)) throw ConfigError("config: time grid step must be positive");
  if (stop < start) throw ConfigError("config: time grid stop must be >= start");
  const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n + 1));
  for (long i = 0; i <= n; ++i) out.push_back(start + step * static_cast<double>(i));
  return out;
}

Mat4 RunConfig::initial_density() const {
  switch (initial_state.kind) {
    case InitialStateConfig::Kind::product:
      return product_state(initial_state.theta1, initial_state.phi1, initial_state.theta2,
                           initial_state.phi2);
    case InitialStateConfig::Kind::bell:
      return bell_state(initial_state.bell);
    case InitialStateConfig::Kind::matrix: {
      Mat4 rho;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho(a, b) = initial_state.rho[4 * a + b];
      try {
        check_density_matrix(rho, 1e-8);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: initial_state.rho: ") + e.what());
      }
      return rho;
    }
  }
  throw ConfigError("config: initial_state.kind is unset");
}

RunConfig default_config() { return RunConfig{}; }

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::redfield: return "redfield";
    case Engine::dephasing_exact: return "dephasing-exact";
    case Engine::auto_select: return "auto";
  }
  return "auto";
}

const char* bell_name(Bell b) {
  switch (b) {
    case Bell::psi_minus: return "psi_minus";
    case Bell::psi_plus: return "psi_plus";
    case Bell::phi_plus: return "phi_plus";
  }
  return "psi_minus";
}

json config_to_json(const RunConfig& c) {
  json j;
  j["model"] = {{"omega2", c.model.omega2}, {"g", c.model.g}};
  j["bath"] = {{"gamma", c.bath.gamma},
               {"omega_c", c.bath.omega_c},
               {"temperature", c.bath.temperature}};
  json st;
  st["kind"] = kind_name(c.initial_state.kind);
  switch (c.initial_state.kind) {
    case InitialStateConfig::Kind::product:
      st["theta1"] = c.initial_state.theta1;
      st["phi1"] = c.initial_state.phi1;
      st["theta2"] = c.initial_state.theta2;
      st["phi2"] = c.initial_state.phi2;
      break;
    case InitialStateConfig::Kind::bell:
      st["which"] = bell_name(c.initial_state.bell);
      break;
    case InitialStateConfig::Kind::matrix: {
      json rows = json::array();
      for (int a = 0; a < 4; ++a) {
        json row = json::array();
        for (int b = 0; b < 4; ++b) {
          const cxd& e = c.initial_state.rho[4 * a + b];
          row.push_back(json::array({e.real(), e.imag()}));
        }
        rows.push_back(row);
      }
      st["rho"] = rows;
      break;
    }
  }
  j["initial_state"] = st;
  j["engine"] = engine_name(c.engine);
  j["include_lamb_shift"] = c.include_lamb_shift;
  j["quadrature"] = {{"upper_mult", c.quadrature.upper_mult},
                     {"rel_tol", c.quadrature.rel_tol},
                     {"abs_tol", c.quadrature.abs_tol},
                     {"max_intervals", c.quadrature.max_intervals}};
  j["sync"] = {{"window", c.sync.window},       {"stride", c.sync.stride},
               {"dt", c.sync.dt},               {"threshold", c.sync.threshold},
               {"persistence", c.sync.persistence}, {"horizon", c.sync.horizon}};
  j["evolve"] = {{"t_max", c.evolve.t_max}, {"dt", c.evolve.dt}};
  j["correlations"] = {{"measured_party", c.correlations.measured == Party::a ? "a" : "b"},
                       {"n_theta", c.correlations.n_theta},
                       {"n_phi", c.correlations.n_phi},
                       {"angle_tol", c.correlations.angle_tol},
                       {"times", times_to_json(c.correlations.times)},
                       {"rescan_every", c.correlations.rescan_every}};
  j["sweep"] = {{"delta", axis_to_json(c.sweep.delta)}, {"g", axis_to_json(c.sweep.g)}};
  j["positivity"] = {{"warn_tol", c.positivity.warn_tol}, {"hard_cap", c.positivity.hard_cap}};
  j["output"] = {{"prefix", c.output.prefix}};
  return j;
}

RunConfig config_from_json(const json& j) {
  expect_object(j, "(root)");
  check_keys(j, "",
             {"model", "bath", "initial_state", "engine", "include_lamb_shift", "quadrature",
              "sync", "evolve", "correlations", "sweep", "positivity", "output"});
  RunConfig c = default_config();
  if (j.contains("model")) {
    const json& m = j.at("model");
    expect_object(m, "model");
    check_keys(m, "model", {"omega2", "g"});
    c.model.omega2 = get_num(m, "omega2", c.model.omega2, "model");
    c.model.g = get_num(m, "g", c.model.g, "model");
  }
  if (j.contains("bath")) {
    const json& b = j.at("bath");
    expect_object(b, "bath");
    check_keys(b, "bath", {"gamma", "omega_c", "temperature"});
    c.bath.gamma = get_num(b, "gamma", c.bath.gamma, "bath");
    c.bath.omega_c = get_num(b, "omega_c", c.bath.omega_c, "bath");
    c.bath.temperature = get_num(b, "temperature", c.bath.temperature, "bath");
  }
  if (j.contains("initial_state"))
    c.initial_state = parse_state(j.at("initial_state"), "initial_state", c.initial_state);
  if (j.contains("engine")) {
    const std::string e = get_str(j, "engine", engine_name(c.engine), "");
    if (e == "redfield")
      c.engine = Engine::redfield;
    else if (e == "dephasing-exact")
      c.engine = Engine::dephasing_exact;
    else if (e == "auto")
      c.engine = Engine::auto_select;
    else
      fail("engine", "must be redfield, dephasing-exact, or auto");
  }
  c.include_lamb_shift = get_bool(j, "include_lamb_shift", c.include_lamb_shift, "");
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    expect_object(q, "quadrature");
    check_keys(q, "quadrature", {"upper_mult", "rel_tol", "abs_tol", "max_intervals"});
    c.quadrature.upper_mult = get_num(q, "upper_mult", c.quadrature.upper_mult, "quadrature");
    c.quadrature.rel_tol = get_num(q, "rel_tol", c.quadrature.rel_tol, "quadrature");
    c.quadrature.abs_tol = get_num(q, "abs_tol", c.quadrature.abs_tol, "quadrature");
    c.quadrature.max_intervals =
        get_int(q, "max_intervals", c.quadrature.max_intervals, "quadrature");
  }
  if (j.contains("sync")) {
    const json& s = j.at("sync");
    expect_object(s, "sync");
    check_keys(s, "sync", {"window", "stride", "dt", "threshold", "persistence", "horizon"});
    c.sync.window = get_num(s, "window", c.sync.window, "sync");
    c.sync.stride = get_num(s, "stride", c.sync.stride, "sync");
    c.sync.dt = get_num(s, "dt", c.sync.dt, "sync");
    c.sync.threshold = get_num(s, "threshold", c.sync.threshold, "sync");
    c.sync.persistence = get_int(s, "persistence", c.sync.persistence, "sync");
    c.sync.horizon = get_num(s, "horizon", c.sync.horizon, "sync");
  }
  if (j.contains("evolve")) {
    const json& e = j.at("evolve");
    expect_object(e, "evolve");
    check_keys(e, "evolve", {"t_max", "dt"});
    c.evolve.t_max = get_num(e, "t_max", c.evolve.t_max, "evolve");
    c.evolve.dt = get_num(e, "dt", c.evolve.dt, "evolve");
  }
  if (j.contains("correlations")) {
    const json& co = j.at("correlations");
    expect_object(co, "correlations");
    check_keys(co, "correlations",
               {"measured_party", "n_theta", "n_phi", "angle_tol", "times", "rescan_every"});
    const std::string p = get_str(co, "measured_party",
                                  c.correlations.measured == Party::a ? "a" : "b",
                                  "correlations");
    if (p == "a")
      c.correlations.measured = Party::a;
    else if (p == "b")
      c.correlations.measured = Party::b;
    else
      fail("correlations.measured_party", "must be a or b");
    c.correlations.n_theta = get_int(co, "n_theta", c.correlations.n_theta, "correlations");
    c.correlations.n_phi = get_int(co, "n_phi", c.correlations.n_phi, "correlations");
    c.correlations.angle_tol =
        get_num(co, "angle_tol", c.correlations.angle_tol, "correlations");
    if (co.contains("times"))
      c.correlations.times =
          parse_times(co.at("times"), "correlations.times", c.correlations.times);
    c.correlations.rescan_every =
        get_int(co, "rescan_every", c.correlations.rescan_every, "correlations");
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    expect_object(s, "sweep");
    check_keys(s, "sweep", {"delta", "g"});
    if (s.contains("delta")) c.sweep.delta = parse_axis(s.at("delta"), "sweep.delta", c.sweep.delta);
    if (s.contains("g")) c.sweep.g = parse_axis(s.at("g"), "sweep.g", c.sweep.g);
  }
  if (j.contains("positivity")) {
    const json& p = j.at("positivity");
    expect_object(p, "positivity");
    check_keys(p, "positivity", {"warn_tol", "hard_cap"});
    c.positivity.warn_tol = get_num(p, "warn_tol", c.positivity.warn_tol, "positivity");
    c.positivity.hard_cap = get_num(p, "hard_cap", c.positivity.hard_cap, "positivity");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    expect_object(o, "output");
    check_keys(o, "output", {"prefix"});
    c.output.prefix = get_str(o, "prefix", c.output.prefix, "output");
  }
  validate_config(c);
  return c;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const size_t upto = e.byte > 0 ? e.byte - 1 : 0;
    for (size_t i = 0; i < upto && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      e.what());
  }
}

void merge_config(json& base, const json& overlay) {
  if (!overlay.is_object()) throw ConfigError("config: root must be a JSON object");
  merge_into(base, overlay, "");
}

void apply_overrides(json& base, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override must look like key.path=value: " + ov);
    const std::string key = ov.substr(0, eq);
    const std::string valtext = ov.substr(eq + 1);
    json val;
    try {
      val = json::parse(valtext);
    } catch (const json::parse_error&) {
      val = valtext;  // bare word, keep as string
    }
    std::string ptr;
    for (char ch : key) ptr += (ch == '.') ? '/' : ch;
    try {
      base[json::json_pointer("/" + ptr)] = val;
    } catch (const std::exception& e) {
      throw ConfigError("override " + ov + ": " + e.what());
    }
  }
}

RunConfig assemble_config(const std::optional<std::string>& config_path,
                          const json& recipe_overlay, const std::vector<std::string>& overrides,
                          json* effective_out) {
  json j = config_to_json(default_config());
  if (config_path) {
    std::ifstream in(*config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + *config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    merge_config(j, parse_json_text(ss.str(), *config_path));
  }
  if (recipe_overlay.is_object() && !recipe_overlay.empty()) merge_config(j, recipe_overlay);
  apply_overrides(j, overrides);
  RunConfig cfg = config_from_json(j);
  if (effective_out) *effective_out = config_to_json(cfg);
  return cfg;
}

}  // namespace spinsync
