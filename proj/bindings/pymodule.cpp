// pymodule.cpp — pybind11 face of the core library
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "spinsync/correlations.hpp"
#include "spinsync/dephasing.hpp"
#include "spinsync/redfield.hpp"
#include "spinsync/sync.hpp"

namespace py = pybind11;
using namespace spinsync;

PYBIND11_MODULE(_spinsync, m) {
  m.doc() = "Two detuned spins in a shared thermal bath: Redfield dynamics, the "
            "commuting-coupling dephasing channel, synchronization analytics and "
            "correlation measures.";
  m.attr("__version__") = "0.1.0";

  py::class_<BathParams>(m, "BathParams")
      .def(py::init([](double gamma, double omega_c, double temperature) {
             BathParams b{gamma, omega_c, temperature};
             validate_bath(b);
             return b;
           }),
           py::arg("gamma") = 1e-3, py::arg("omega_c") = 20.0, py::arg("temperature") = 1.0)
      .def_readwrite("gamma", &BathParams::gamma)
      .def_readwrite("omega_c", &BathParams::omega_c)
      .def_readwrite("temperature", &BathParams::temperature)
      .def("beta", &BathParams::beta)
      .def("__repr__", [](const BathParams& b) {
        return "BathParams(gamma=" + std::to_string(b.gamma) +
               ", omega_c=" + std::to_string(b.omega_c) +
               ", temperature=" + std::to_string(b.temperature) + ")";
      });

  py::class_<SpinPairModel>(m, "SpinPairModel")
      .def_readonly("omega1", &SpinPairModel::omega1)
      .def_readonly("omega2", &SpinPairModel::omega2)
      .def_readonly("g", &SpinPairModel::g)
      .def_readonly("hamiltonian", &SpinPairModel::hamiltonian)
      .def_readonly("coupling", &SpinPairModel::coupling)
      .def_readonly("energies", &SpinPairModel::energies)
      .def_property_readonly("delta", &SpinPairModel::delta)
      .def("bohr", &SpinPairModel::bohr, py::arg("i"), py::arg("j"))
      .def("to_eigenbasis", &SpinPairModel::to_eigenbasis, py::arg("rho"))
      .def("from_eigenbasis", &SpinPairModel::from_eigenbasis, py::arg("rho"));

  m.def("build_model", &build_model, py::arg("omega2"), py::arg("g"));
  m.def("build_model_delta", &build_model_delta, py::arg("delta"), py::arg("g"));
  m.def("product_state", &product_state, py::arg("theta1"), py::arg("phi1"),
        py::arg("theta2"), py::arg("phi2"));
  m.def(
      "bell_state",
      [](const std::string& which) {
        if (which == "psi_minus") return bell_state(Bell::psi_minus);
        if (which == "psi_plus") return bell_state(Bell::psi_plus);
        if (which == "phi_plus") return bell_state(Bell::phi_plus);
        throw std::invalid_argument("unknown Bell state: " + which);
      },
      py::arg("which"));

  m.def("spectral_density", &spectral_density, py::arg("omega"), py::arg("bath"));
  py::enum_<RateSign>(m, "RateSign")
      .value("plus", RateSign::plus)
      .value("minus", RateSign::minus);
  m.def(
      "gamma_rate",
      [](double x, RateSign sign, const BathParams& bath) {
        return gamma_rate(x, sign, bath);
      },
      py::arg("x"), py::arg("sign"), py::arg("bath"));

  py::class_<RedfieldGenerator>(m, "RedfieldGenerator")
      .def_readonly("model", &RedfieldGenerator::model)
      .def_readonly("bath", &RedfieldGenerator::bath)
      .def_readonly("include_lamb", &RedfieldGenerator::include_lamb)
      .def_readonly("matrix", &RedfieldGenerator::g_matrix)
      .def_readonly("gamma_plus_table", &RedfieldGenerator::gamma_plus_tbl)
      .def_readonly("gamma_minus_table", &RedfieldGenerator::gamma_minus_tbl);

  m.def(
      "build_generator",
      [](const SpinPairModel& model, const BathParams& bath, bool include_lamb) {
        return build_generator(model, bath, {}, include_lamb);
      },
      py::arg("model"), py::arg("bath"), py::arg("include_lamb") = true);

  py::class_<GeneratorSpectrum>(m, "GeneratorSpectrum")
      .def_readonly("values", &GeneratorSpectrum::values)
      .def_readonly("defective", &GeneratorSpectrum::defective);
  m.def("spectrum", &spectrum, py::arg("generator"));

  py::class_<RankedMode>(m, "RankedMode")
      .def_readonly("index", &RankedMode::index)
      .def_readonly("decay_rate", &RankedMode::decay_rate)
      .def_readonly("frequency", &RankedMode::frequency)
      .def_readonly("weight", &RankedMode::weight);
  py::class_<SlowModePair>(m, "SlowModePair")
      .def_readonly("slow", &SlowModePair::slow)
      .def_readonly("fast", &SlowModePair::fast)
      .def_readonly("gap", &SlowModePair::gap)
      .def_readonly("valid", &SlowModePair::valid);
  m.def("rank_modes", &rank_modes, py::arg("generator"), py::arg("spectrum"),
        py::arg("observable"), py::arg("initial"));
  m.def("select_slow_pair", &select_slow_pair, py::arg("generator"), py::arg("spectrum"),
        py::arg("initial"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("sigma1x", &Trajectory::sigma1x)
      .def_readonly("sigma2x", &Trajectory::sigma2x)
      .def_readonly("sigma1z", &Trajectory::sigma1z)
      .def_readonly("sigma2z", &Trajectory::sigma2z)
      .def_readonly("min_eig", &Trajectory::min_eig)
      .def_readonly("trace_err", &Trajectory::trace_err)
      .def_readonly("used_fallback", &Trajectory::used_fallback)
      .def("worst_min_eig", &Trajectory::worst_min_eig);
  m.def("propagate", &propagate, py::arg("generator"), py::arg("spectrum"),
        py::arg("initial"), py::arg("times"), py::arg("store_states") = false);
  m.def("propagate_stepped", &propagate_stepped, py::arg("generator"), py::arg("initial"),
        py::arg("times"), py::arg("store_states") = false, py::arg("local_tol") = 1e-9);

  py::class_<GapCell>(m, "GapCell")
      .def_readonly("delta", &GapCell::delta)
      .def_readonly("g", &GapCell::g)
      .def_readonly("gap", &GapCell::gap)
      .def_readonly("frequency", &GapCell::frequency)
      .def_readonly("ok", &GapCell::ok)
      .def_readonly("error", &GapCell::error);
  m.def(
      "gap_map",
      [](const std::vector<double>& deltas, const std::vector<double>& gs,
         const BathParams& bath, const Mat4& initial, bool include_lamb, int workers) {
        return gap_map(deltas, gs, bath, initial, {}, include_lamb, workers);
      },
      py::arg("deltas"), py::arg("gs"), py::arg("bath"), py::arg("initial"),
      py::arg("include_lamb") = true, py::arg("workers") = 0);

  py::class_<DephasingChannel>(m, "DephasingChannel")
      .def_readonly("model", &DephasingChannel::model)
      .def_readonly("bath", &DephasingChannel::bath)
      .def_readonly("include_lamb", &DephasingChannel::include_lamb)
      .def_readonly("lambdas", &DephasingChannel::lambda)
      .def_readonly("level", &DephasingChannel::level)
      .def("decay_integral", &DephasingChannel::decay_integral, py::arg("t"))
      .def("phase_integral", &DephasingChannel::phase_integral, py::arg("t"))
      .def("gamma_ab", &DephasingChannel::gamma_ab, py::arg("t"), py::arg("a"), py::arg("b"))
      .def("lamb_ab", &DephasingChannel::lamb_ab, py::arg("t"), py::arg("a"), py::arg("b"))
      .def("evolve", &DephasingChannel::evolve, py::arg("initial"), py::arg("t"));
  m.def("make_dephasing_channel", &make_dephasing_channel, py::arg("model"), py::arg("bath"),
        py::arg("include_lamb") = true);
  m.def("asymptotic_state", &asymptotic_state, py::arg("initial"), py::arg("xi"));

  py::enum_<Party>(m, "Party").value("a", Party::a).value("b", Party::b);
  py::class_<CorrelationValues>(m, "CorrelationValues")
      .def_readonly("concurrence", &CorrelationValues::concurrence)
      .def_readonly("eof", &CorrelationValues::eof)
      .def_readonly("mutual_info", &CorrelationValues::mutual_info)
      .def_readonly("classical", &CorrelationValues::classical)
      .def_readonly("discord", &CorrelationValues::discord)
      .def_readonly("theta_opt", &CorrelationValues::theta_opt)
      .def_readonly("phi_opt", &CorrelationValues::phi_opt);

  m.def("concurrence", &concurrence, py::arg("rho"));
  m.def("eof_from_concurrence", &eof_from_concurrence, py::arg("c"));
  m.def("entanglement_of_formation", &entanglement_of_formation, py::arg("rho"));
  m.def("project_to_physical", &project_to_physical, py::arg("rho"), py::arg("floor") = 1e-3);
  m.def(
      "discord_and_classical",
      [](const Mat4& rho, Party measured) { return discord_and_classical(rho, measured); },
      py::arg("rho"), py::arg("measured") = Party::b);
  m.def("xstate_discord", &xstate_discord, py::arg("rho"));
  m.def(
      "correlation_trace",
      [](const std::vector<Mat4>& states, Party measured, int rescan_every,
         double positivity_floor) {
        return correlation_trace(states, measured, {}, rescan_every, positivity_floor);
      },
      py::arg("states"), py::arg("measured") = Party::b, py::arg("rescan_every") = 20,
      py::arg("positivity_floor") = 1e-3);

  py::class_<SyncConfig>(m, "SyncConfig")
      .def(py::init([](double window, double stride, double dt, double threshold,
                       int persistence, double horizon) {
             SyncConfig c{window, stride, dt, threshold, persistence, horizon};
             validate_sync(c);
             return c;
           }),
           py::arg("window") = 6.0, py::arg("stride") = 4.0, py::arg("dt") = 0.02,
           py::arg("threshold") = 0.92, py::arg("persistence") = 12,
           py::arg("horizon") = 500.0)
      .def_readwrite("window", &SyncConfig::window)
      .def_readwrite("stride", &SyncConfig::stride)
      .def_readwrite("dt", &SyncConfig::dt)
      .def_readwrite("threshold", &SyncConfig::threshold)
      .def_readwrite("persistence", &SyncConfig::persistence)
      .def_readwrite("horizon", &SyncConfig::horizon);

  py::class_<CPoint>(m, "CPoint")
      .def_readonly("t", &CPoint::t)
      .def_readonly("value", &CPoint::value)
      .def_readonly("defined", &CPoint::defined);
  py::class_<SyncReport>(m, "SyncReport")
      .def_readonly("series", &SyncReport::series)
      .def_readonly("reached", &SyncReport::reached)
      .def_readonly("t_synch", &SyncReport::t_synch)
      .def_readonly("sign", &SyncReport::sign)
      .def_readonly("skipped_windows", &SyncReport::skipped_windows);
  py::class_<FrequencyEstimate>(m, "FrequencyEstimate")
      .def_readonly("value", &FrequencyEstimate::value)
      .def_readonly("error", &FrequencyEstimate::error)
      .def_readonly("crossings", &FrequencyEstimate::crossings);
  py::class_<SyncCell>(m, "SyncCell")
      .def_readonly("delta", &SyncCell::delta)
      .def_readonly("g", &SyncCell::g)
      .def_readonly("t_synch", &SyncCell::t_synch)
      .def_readonly("reached", &SyncCell::reached)
      .def_readonly("sign", &SyncCell::sign)
      .def_readonly("gap", &SyncCell::gap)
      .def_readonly("frequency", &SyncCell::frequency)
      .def_readonly("worst_min_eig", &SyncCell::worst_min_eig)
      .def_readonly("ok", &SyncCell::ok)
      .def_readonly("error", &SyncCell::error);

  m.def("time_grid", &time_grid, py::arg("end"), py::arg("dt"));
  m.def(
      "correlation_coefficient",
      [](const std::vector<double>& f, const std::vector<double>& g, double dt) {
        if (f.size() != g.size())
          throw std::invalid_argument("series lengths differ");
        return correlation_coefficient(f.data(), g.data(), static_cast<int>(f.size()), dt);
      },
      py::arg("f"), py::arg("g"), py::arg("dt"));
  m.def("c_series", &c_series, py::arg("f"), py::arg("g"), py::arg("times"), py::arg("config"));
  m.def("sync_time", &sync_time, py::arg("f"), py::arg("g"), py::arg("times"),
        py::arg("config"));
  m.def("sync_frequency", &sync_frequency, py::arg("signal"), py::arg("times"),
        py::arg("t_from"), py::arg("cycles"));
  m.def(
      "sync_map",
      [](const std::vector<double>& deltas, const std::vector<double>& gs,
         const BathParams& bath, const SyncConfig& cfg, const Mat4& initial,
         bool include_lamb, int workers) {
        return sync_map(deltas, gs, bath, cfg, initial, {}, include_lamb, workers);
      },
      py::arg("deltas"), py::arg("gs"), py::arg("bath"), py::arg("config"),
      py::arg("initial"), py::arg("include_lamb") = true, py::arg("workers") = 0);
}
