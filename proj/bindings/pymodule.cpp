#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sinex/analysis.hpp"
#include "sinex/errors.hpp"
#include "sinex/sine_builder.hpp"
#include "sinex/sx_io.hpp"
#include "sinex/version.hpp"

namespace py = pybind11;

namespace {

sinex::SineParams params_from_simulink(double amplitude, double bias, double frequency,
                                       double phase, double sample_time,
                                       const std::string& sine_type) {
  sinex::SimulinkSineBlock block;
  block.amplitude = amplitude;
  block.bias = bias;
  block.frequency = frequency;
  block.phase = phase;
  block.sample_time = sample_time;
  if (sine_type == "time_based")
    block.sine_type = sinex::SineType::time_based;
  else if (sine_type == "sample_based")
    block.sine_type = sinex::SineType::sample_based;
  else
    throw sinex::InvalidArgument("unknown sine_type '" + sine_type + "'");
  return sinex::from_simulink(block);
}

std::string model_xml(const sinex::SineParams& p) {
  return sinex::emit_sx(sinex::build_network(p));
}

std::string config_text(const sinex::SineParams& p, double enlarge, double tolerance,
                        double horizon) {
  sinex::AnalysisConfig cfg;
  cfg.initially =
      sinex::initially_predicate(sinex::enlarge_initial(sinex::initial_conditions(p), enlarge));
  cfg.flowpipe_tolerance = tolerance;
  cfg.time_horizon = horizon;
  return sinex::emit_cfg(cfg);
}

py::dict check(const sinex::SineParams& p, double enlarge, double step, double horizon) {
  const sinex::InitState init = sinex::initial_conditions(p);
  const sinex::Flowpipe fp =
      sinex::flowpipe(sinex::enlarge_initial(init, enlarge), p, step, horizon);
  const sinex::Trajectory sim = sinex::simulate(p, {init.x0, init.y0, 0.0}, step, horizon);
  const sinex::ContainmentReport cr = sinex::check_containment(fp, sim);
  double residual = 0.0;
  for (const sinex::TrajectorySample& s : sim.samples)
    residual = std::max(residual, sinex::conservation_residual(p, s.state));
  py::dict d;
  d["contained"] = cr.contained;
  d["margin"] = cr.margin;
  d["violations"] = cr.violations.size();
  d["fallback_segments"] = cr.fallback_segments.size();
  d["segments"] = fp.segments.size();
  d["rk4_residual"] = residual;
  return d;
}

std::vector<std::tuple<double, double, double>> simulate_py(const sinex::SineParams& p, double x0,
                                                            double y0, double step,
                                                            double horizon) {
  const sinex::Trajectory tr = sinex::simulate(p, {x0, y0, 0.0}, step, horizon);
  std::vector<std::tuple<double, double, double>> out;
  out.reserve(tr.samples.size());
  for (const sinex::TrajectorySample& s : tr.samples)
    out.emplace_back(s.time, s.state.x, s.state.y);
  return out;
}

std::vector<std::vector<std::pair<double, double>>> parse_gen_py(const std::string& text) {
  std::vector<std::vector<std::pair<double, double>>> out;
  for (const sinex::Polygon& poly : sinex::parse_gen(text)) {
    std::vector<std::pair<double, double>> verts;
    verts.reserve(poly.vertices.size());
    for (const sinex::Point2& v : poly.vertices) verts.emplace_back(v.x, v.y);
    out.push_back(std::move(verts));
  }
  return out;
}

std::string emit_gen_py(const std::vector<std::vector<std::pair<double, double>>>& polys) {
  std::vector<sinex::Polygon> native;
  native.reserve(polys.size());
  for (const auto& poly : polys) {
    sinex::Polygon p;
    p.vertices.reserve(poly.size());
    for (const auto& [x, y] : poly) p.vertices.push_back({x, y});
    native.push_back(std::move(p));
  }
  return sinex::emit_gen(native);
}

}  // namespace

PYBIND11_MODULE(sinex, m) {
  m.doc() = "Sinusoid to SpaceEx hybrid automaton compiler and numerical checker";
  m.attr("__version__") = sinex::kVersion;

  // Translators run newest-first, so the base class goes first.
  py::register_exception<sinex::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<sinex::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<sinex::NonZeroSampleTimeError>(m, "NonZeroSampleTimeError",
                                                        PyExc_ValueError);
  py::register_exception<sinex::SampleBasedUnsupportedError>(m, "SampleBasedUnsupportedError",
                                                             PyExc_ValueError);

  py::class_<sinex::SineParams>(m, "SineParams")
      .def_readonly("amplitude", &sinex::SineParams::amplitude)
      .def_readonly("omega", &sinex::SineParams::omega)
      .def_readonly("bias", &sinex::SineParams::bias)
      .def_readonly("phase", &sinex::SineParams::phase)
      .def("__repr__", [](const sinex::SineParams& p) {
        return "SineParams(amplitude=" + std::to_string(p.amplitude) +
               ", omega=" + std::to_string(p.omega) + ", bias=" + std::to_string(p.bias) +
               ", phase=" + std::to_string(p.phase) + ")";
      });

  m.def("make_sine_params", &sinex::make_sine_params, py::arg("amplitude"), py::arg("omega"),
        py::arg("bias") = 0.0, py::arg("phase") = 0.0,
        "Normalize signal parameters (negative amplitude folds into the phase)");
  m.def("from_simulink", &params_from_simulink, py::arg("amplitude"), py::arg("bias"),
        py::arg("frequency"), py::arg("phase") = 0.0, py::arg("sample_time") = 0.0,
        py::arg("sine_type") = "time_based",
        "Map Simulink sine block settings onto SineParams");
  m.def(
      "initial_conditions",
      [](const sinex::SineParams& p) {
        const sinex::InitState s = sinex::initial_conditions(p);
        return std::make_tuple(s.x0, s.y0, s.t0);
      },
      py::arg("params"), "Exact initial state (x0, y0, t0) of the encoding");
  m.def(
      "analytic_state",
      [](const sinex::SineParams& p, double t) {
        const sinex::StateVector s = sinex::analytic_state(p, t);
        return std::make_tuple(s.x, s.y, s.t);
      },
      py::arg("params"), py::arg("t"), "Closed-form state (x, y, t) at time t");
  m.def(
      "conservation_residual",
      [](const sinex::SineParams& p, double x, double y, double t) {
        return sinex::conservation_residual(p, {x, y, t});
      },
      py::arg("params"), py::arg("x"), py::arg("y"), py::arg("t"),
      "|(y - mu)^2 + omega^2 (x - mu t)^2 - A^2|");
  m.def("model_xml", &model_xml, py::arg("params"), "SpaceEx SX document for the sinusoid");
  m.def("config_text", &config_text, py::arg("params"), py::arg("enlarge") = 0.0,
        py::arg("tolerance") = 0.01, py::arg("horizon") = 10.0,
        "SpaceEx cfg file for the sinusoid");
  m.def("simulate", &simulate_py, py::arg("params"), py::arg("x0"), py::arg("y0"),
        py::arg("step"), py::arg("horizon"), "RK4 trajectory as (t, x, y) tuples");
  m.def("check", &check, py::arg("params"), py::arg("enlarge") = 0.0, py::arg("step") = 0.01,
        py::arg("horizon") = 10.0,
        "Flowpipe containment self-check; returns a result dictionary");
  m.def("parse_gen", &parse_gen_py, py::arg("text"),
        "Parse GEN vertex blocks into lists of (x, y) tuples");
  m.def("emit_gen", &emit_gen_py, py::arg("polygons"), "Render polygons as GEN text");
}
