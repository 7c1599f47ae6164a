#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sinex/analysis.hpp"
#include "sinex/errors.hpp"
#include "sinex/numfmt.hpp"
#include "sinex/sine_builder.hpp"
#include "sinex/svg.hpp"
#include "sinex/sx_io.hpp"
#include "sinex/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct SignalFlags {
  double amplitude = 1.0;
  double omega = 0.0;
  double bias = 0.0;
  double phase = 0.0;
  bool simulink = false;
  double frequency = 0.0;
  double sample_time = 0.0;
  std::string sine_type = "time_based";
  CLI::Option* omega_opt = nullptr;
  CLI::Option* frequency_opt = nullptr;
};

void add_signal_flags(CLI::App& cmd, SignalFlags& f) {
  cmd.add_option("-A,--amplitude", f.amplitude, "Signal amplitude A")->capture_default_str();
  f.omega_opt = cmd.add_option("-w,--omega", f.omega, "Angular frequency omega [rad/s]");
  cmd.add_option("-m,--bias,--mu", f.bias, "Signal bias mu")->capture_default_str();
  cmd.add_option("-p,--phase", f.phase, "Phase phi [rad]")->capture_default_str();
  cmd.add_flag("--simulink", f.simulink,
               "Treat the flags as Simulink sine block settings (needs --frequency)");
  f.frequency_opt =
      cmd.add_option("--frequency", f.frequency, "Simulink block frequency [rad/s]");
  cmd.add_option("--sample-time", f.sample_time, "Simulink block sample time [s]")
      ->capture_default_str();
  cmd.add_option("--sine-type", f.sine_type, "Simulink sine type: time_based or sample_based")
      ->capture_default_str();
}

sinex::SineParams resolve_signal(const SignalFlags& f) {
  if (f.simulink) {
    if (f.frequency_opt->count() == 0)
      throw sinex::InvalidArgument("--simulink requires --frequency");
    sinex::SimulinkSineBlock block;
    block.amplitude = f.amplitude;
    block.bias = f.bias;
    block.frequency = f.frequency;
    block.phase = f.phase;
    block.sample_time = f.sample_time;
    if (f.sine_type == "time_based")
      block.sine_type = sinex::SineType::time_based;
    else if (f.sine_type == "sample_based")
      block.sine_type = sinex::SineType::sample_based;
    else
      throw sinex::InvalidArgument("unknown --sine-type '" + f.sine_type + "'");
    return sinex::from_simulink(block);
  }
  if (f.omega_opt->count() == 0)
    throw sinex::InvalidArgument("--omega is required (or pass --simulink with --frequency)");
  return sinex::make_sine_params(f.amplitude, f.omega, f.bias, f.phase);
}

ordered_json signal_json(const sinex::SineParams& p) {
  return {{"amplitude", p.amplitude},
          {"omega", p.omega},
          {"bias", p.bias},
          {"phase", p.phase}};
}

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sinex::Error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw sinex::Error("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sinex::InvalidArgument("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const fs::path& dir, const std::string& command, ordered_json parameters,
                    std::vector<std::string> inputs, std::vector<std::string> outputs,
                    double duration_seconds) {
  ordered_json m;
  m["command"] = command;
  m["tool"] = "sinex";
  m["version"] = sinex::kVersion;
  m["parameters"] = std::move(parameters);
  m["inputs"] = std::move(inputs);
  m["outputs"] = std::move(outputs);
  m["duration_seconds"] = duration_seconds;
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

sinex::Scenario parse_scenario(const std::string& s) {
  if (s == "stc") return sinex::Scenario::stc;
  if (s == "lgg") return sinex::Scenario::lgg;
  if (s == "supp") return sinex::Scenario::supp;
  throw sinex::InvalidArgument("unknown scenario '" + s + "' (expected stc, lgg or supp)");
}

sinex::OutputFormat parse_output_format(const std::string& s) {
  if (s == "GEN") return sinex::OutputFormat::gen;
  if (s == "TXT") return sinex::OutputFormat::txt;
  if (s == "INTV") return sinex::OutputFormat::intv;
  throw sinex::InvalidArgument("unknown output format '" + s + "' (expected GEN, TXT or INTV)");
}

bool is_output_var(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return sinex::is_identifier(s);
  return sinex::is_identifier(std::string_view(s).substr(0, dot)) &&
         sinex::is_identifier(std::string_view(s).substr(dot + 1));
}

sinex::Dim parse_dim(char c) {
  switch (c) {
    case 'x': return sinex::Dim::x;
    case 'y': return sinex::Dim::y;
    case 't': return sinex::Dim::t;
    default: throw sinex::InvalidArgument(std::string("unknown dimension '") + c + "'");
  }
}

std::pair<sinex::Dim, sinex::Dim> parse_dims(const std::string& text) {
  std::string letters;
  for (char c : text)
    if (c != ',' && c != ' ') letters.push_back(c);
  if (letters.size() != 2)
    throw sinex::InvalidArgument("--dims expects two of x, y, t (e.g. t,y)");
  const auto d0 = parse_dim(letters[0]);
  const auto d1 = parse_dim(letters[1]);
  if (d0 == d1) throw sinex::InvalidArgument("--dims must name two distinct dimensions");
  return {d0, d1};
}

double state_component(const sinex::StateVector& s, sinex::Dim d) {
  switch (d) {
    case sinex::Dim::x: return s.x;
    case sinex::Dim::y: return s.y;
    case sinex::Dim::t: return s.t;
  }
  throw sinex::InvalidArgument("bad dimension");
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  SignalFlags signal;
  double enlarge = 0.0;
  std::string scenario = "stc";
  double flowpipe_tolerance = 0.01;
  double time_horizon = 10.0;
  int iter_max = -1;
  std::vector<std::string> output_variables{"t_gl", "y"};
  std::string output_format = "GEN";
  std::string out_dir = ".";
};

int run_generate(const GenerateArgs& a) {
  const Stopwatch timer;
  const sinex::SineParams p = resolve_signal(a.signal);
  const sinex::InitState init = sinex::initial_conditions(p);
  const sinex::StateBox box = sinex::enlarge_initial(init, a.enlarge);
  const sinex::Model model = sinex::build_network(p);

  for (const std::string& v : a.output_variables)
    if (!is_output_var(v))
      throw sinex::InvalidArgument("bad output variable '" + v + "'");

  sinex::AnalysisConfig cfg;
  cfg.system = "system";
  cfg.initially = sinex::initially_predicate(box);
  cfg.scenario = parse_scenario(a.scenario);
  cfg.flowpipe_tolerance = a.flowpipe_tolerance;
  cfg.time_horizon = a.time_horizon;
  cfg.iter_max = a.iter_max;
  cfg.output_variables = a.output_variables;
  cfg.output_format = parse_output_format(a.output_format);

  const std::string xml = sinex::emit_sx(model);
  const std::string cfg_text = sinex::emit_cfg(cfg);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_file(dir / "model.xml", xml);
  write_file(dir / "model.cfg", cfg_text);

  ordered_json params = signal_json(p);
  params["enlarge"] = a.enlarge;
  params["scenario"] = a.scenario;
  params["flowpipe_tolerance"] = a.flowpipe_tolerance;
  params["time_horizon"] = a.time_horizon;
  params["iter_max"] = a.iter_max;
  params["output_variables"] = a.output_variables;
  params["output_format"] = a.output_format;
  write_manifest(dir, "generate", std::move(params), {},
                 {(dir / "model.xml").string(), (dir / "model.cfg").string()}, timer.seconds());

  std::cout << "x0 = " << sinex::format_double(init.x0) << "\n";
  std::cout << "y0 = " << sinex::format_double(init.y0) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  SignalFlags signal;
  double enlarge = 0.0;
  double step = 0.01;
  double horizon = 10.0;
  double sim_step = 0.0;  // 0 = same as step
  double sim_omega = 0.0;
  CLI::Option* sim_omega_opt = nullptr;
  std::string out_dir = ".";
};

int run_check(const CheckArgs& a) {
  const Stopwatch timer;
  const sinex::SineParams p = resolve_signal(a.signal);
  sinex::SineParams sim_p = p;
  if (a.sim_omega_opt->count() > 0)
    sim_p = sinex::make_sine_params(p.amplitude, a.sim_omega, p.bias, p.phase);

  const sinex::InitState init = sinex::initial_conditions(p);
  const sinex::StateBox box = sinex::enlarge_initial(init, a.enlarge);
  const double sim_step = a.sim_step > 0.0 ? a.sim_step : a.step;

  const sinex::Flowpipe fp = sinex::flowpipe(box, p, a.step, a.horizon);
  const sinex::Trajectory sim =
      sinex::simulate(sim_p, {init.x0, init.y0, 0.0}, sim_step, a.horizon);
  const sinex::ContainmentReport cr = sinex::check_containment(fp, sim);

  double rk4_max = 0.0;
  for (const sinex::TrajectorySample& s : sim.samples)
    rk4_max = std::max(rk4_max, sinex::conservation_residual(p, s.state));
  const sinex::Trajectory ana = sinex::analytic_trajectory(p, sim_step, a.horizon);
  double analytic_max = 0.0;
  for (const sinex::TrajectorySample& s : ana.samples)
    analytic_max = std::max(analytic_max, sinex::conservation_residual(p, s.state));

  const double scale = std::max(1.0, p.amplitude * p.amplitude);
  const double analytic_tol = 1e-9 * scale;
  const double rk4_tol = 1e-6 * scale;
  const bool conservation_ok = analytic_max < analytic_tol && rk4_max < rk4_tol;
  const bool pass = cr.contained && conservation_ok;

  ordered_json report;
  report["contained"] = cr.contained;
  report["margin"] = finite_or_null(cr.margin);
  report["violations"] = cr.violations.size();
  if (cr.violations.empty()) {
    report["first_violation"] = nullptr;
  } else {
    const sinex::Violation& v = cr.violations.front();
    report["first_violation"] = {{"sample_index", v.sample_index},
                                 {"time", v.time},
                                 {"state", {{"x", v.state.x}, {"y", v.state.y}, {"t", v.state.t}}},
                                 {"segment_index", v.segment_index}};
  }
  report["fallback_segments"] = cr.fallback_segments.size();
  report["conservation"] = {{"analytic_max", analytic_max},
                            {"analytic_tolerance", analytic_tol},
                            {"rk4_max", rk4_max},
                            {"rk4_tolerance", rk4_tol},
                            {"ok", conservation_ok}};
  const sinex::Interval ex = sinex::flowpipe_extent(fp, sinex::Dim::x);
  const sinex::Interval ey = sinex::flowpipe_extent(fp, sinex::Dim::y);
  const sinex::Interval et = sinex::flowpipe_extent(fp, sinex::Dim::t);
  report["flowpipe"] = {{"segments", fp.segments.size()},
                        {"step", fp.step},
                        {"horizon", fp.horizon},
                        {"x", {ex.lo, ex.hi}},
                        {"y", {ey.lo, ey.hi}},
                        {"t", {et.lo, et.hi}}};
  ordered_json params = signal_json(p);
  params["enlarge"] = a.enlarge;
  params["step"] = a.step;
  params["sim_step"] = sim_step;
  params["horizon"] = a.horizon;
  if (a.sim_omega_opt->count() > 0) params["sim_omega"] = a.sim_omega;
  report["parameters"] = params;

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_file(dir / "report.json", report.dump(2) + "\n");
  write_manifest(dir, "check", std::move(params), {}, {(dir / "report.json").string()},
                 timer.seconds());

  std::cout << "contained = " << (cr.contained ? "true" : "false") << "\n";
  std::cout << "margin = " << sinex::format_double(cr.margin) << "\n";
  std::cout << "conservation residual: analytic " << sinex::format_double(analytic_max)
            << " (tolerance " << sinex::format_double(analytic_tol) << "), rk4 "
            << sinex::format_double(rk4_max) << " (tolerance " << sinex::format_double(rk4_tol)
            << ")\n";
  if (!cr.violations.empty()) {
    const sinex::Violation& v = cr.violations.front();
    std::cout << "first violation: sample " << v.sample_index << " at t = "
              << sinex::format_double(v.time) << ", state (" << sinex::format_double(v.state.x)
              << ", " << sinex::format_double(v.state.y) << ", "
              << sinex::format_double(v.state.t) << ")\n";
  }
  return pass ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  SignalFlags signal;
  std::string source = "flowpipe";
  double enlarge = 0.0;
  double step = 0.01;
  double horizon = 10.0;
  std::string dims = "t,y";
  std::string file;
  std::string format = "svg";
  bool with_trajectory = false;
  std::string out;
  std::string out_dir = ".";
};

int run_plot(const PlotArgs& a) {
  const Stopwatch timer;
  if (a.format != "svg" && a.format != "csv")
    throw sinex::InvalidArgument("unknown --format '" + a.format + "' (expected svg or csv)");

  std::vector<sinex::Polygon> polys;
  std::vector<sinex::Point2> line;
  std::vector<std::string> inputs;
  std::string x_label;
  std::string y_label;
  ordered_json params;

  const auto project_line = [](const sinex::Trajectory& tr, sinex::Dim d0, sinex::Dim d1) {
    std::vector<sinex::Point2> pts;
    pts.reserve(tr.samples.size());
    for (const sinex::TrajectorySample& s : tr.samples)
      pts.push_back({state_component(s.state, d0), state_component(s.state, d1)});
    return pts;
  };

  if (a.source == "gen") {
    if (a.file.empty()) throw sinex::InvalidArgument("--source gen requires --file");
    polys = sinex::parse_gen(read_file(a.file));
    inputs.push_back(a.file);
    params["file"] = a.file;
  } else if (a.source == "flowpipe" || a.source == "trajectory") {
    const auto [d0, d1] = parse_dims(a.dims);
    x_label = a.dims.substr(0, 1);
    y_label = a.dims.substr(a.dims.size() - 1, 1);
    const sinex::SineParams p = resolve_signal(a.signal);
    const sinex::InitState init = sinex::initial_conditions(p);
    params = signal_json(p);
    params["enlarge"] = a.enlarge;
    params["step"] = a.step;
    params["horizon"] = a.horizon;
    params["dims"] = a.dims;
    if (a.source == "flowpipe") {
      const sinex::StateBox box = sinex::enlarge_initial(init, a.enlarge);
      const sinex::Flowpipe fp = sinex::flowpipe(box, p, a.step, a.horizon);
      polys = sinex::project_flowpipe(fp, d0, d1);
      if (a.with_trajectory)
        line = project_line(sinex::simulate(p, {init.x0, init.y0, 0.0}, a.step, a.horizon), d0,
                            d1);
    } else {
      line = project_line(sinex::simulate(p, {init.x0, init.y0, 0.0}, a.step, a.horizon), d0, d1);
    }
  } else {
    throw sinex::InvalidArgument("unknown --source '" + a.source +
                                 "' (expected flowpipe, trajectory or gen)");
  }
  params["source"] = a.source;
  params["format"] = a.format;

  std::string text;
  if (a.format == "csv") {
    std::vector<sinex::Polygon> blocks = polys;
    if (blocks.empty() && !line.empty()) blocks.push_back(sinex::Polygon{line});
    text = sinex::emit_gen(blocks);
  } else {
    sinex::PlotStyle style;
    style.x_label = x_label;
    style.y_label = y_label;
    text = sinex::render_plot_svg(polys, line, style);
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const fs::path out_path =
      a.out.empty() ? dir / (a.format == "svg" ? "plot.svg" : "plot.csv") : fs::path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_file(out_path, text);
  write_manifest(dir, "plot", std::move(params), std::move(inputs), {out_path.string()},
                 timer.seconds());
  std::cout << out_path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sinusoid to SpaceEx hybrid automaton compiler with a built-in checker"};
  app.set_version_flag("--version", sinex::kVersion);
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* gen_cmd =
      app.add_subcommand("generate", "Write model.xml and model.cfg for a sinusoid");
  add_signal_flags(*gen_cmd, gen_args.signal);
  gen_cmd->add_option("--enlarge", gen_args.enlarge,
                      "Total initial-box width as a fraction of |nominal| (0 = point)")
      ->capture_default_str();
  gen_cmd->add_option("--scenario", gen_args.scenario, "Analysis scenario: stc, lgg or supp")
      ->capture_default_str();
  gen_cmd->add_option("--flowpipe-tolerance", gen_args.flowpipe_tolerance, "Flowpipe tolerance")
      ->capture_default_str();
  gen_cmd->add_option("--time-horizon", gen_args.time_horizon, "Time horizon [s]")
      ->capture_default_str();
  gen_cmd->add_option("--iter-max", gen_args.iter_max, "Max iterations (-1 = fixed point)")
      ->capture_default_str();
  gen_cmd
      ->add_option("--output-variables", gen_args.output_variables,
                   "Comma-separated output variables")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--output-format", gen_args.output_format, "Output format: GEN, TXT, INTV")
      ->capture_default_str();
  gen_cmd->add_option("-o,--out-dir", gen_args.out_dir, "Output directory")
      ->capture_default_str();

  CheckArgs check_args;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "Verify the encoding: flowpipe containment and conservation residuals");
  add_signal_flags(*check_cmd, check_args.signal);
  check_cmd->add_option("--enlarge", check_args.enlarge,
                        "Total initial-box width as a fraction of |nominal| (0 = point)")
      ->capture_default_str();
  check_cmd->add_option("--step", check_args.step, "Flowpipe time step [s]")
      ->capture_default_str();
  check_cmd->add_option("--horizon", check_args.horizon, "Time horizon [s]")
      ->capture_default_str();
  check_cmd->add_option("--sim-step", check_args.sim_step,
                        "RK4 step [s] (default: same as --step)");
  check_args.sim_omega_opt = check_cmd->add_option(
      "--sim-omega", check_args.sim_omega,
      "Override omega for the simulated trajectory only (self-test hook)");
  check_cmd->add_option("-o,--out-dir", check_args.out_dir, "Output directory")
      ->capture_default_str();

  PlotArgs plot_args;
  CLI::App* plot_cmd =
      app.add_subcommand("plot", "Render a flowpipe, trajectory or GEN file as SVG or CSV");
  add_signal_flags(*plot_cmd, plot_args.signal);
  plot_cmd->add_option("--source", plot_args.source, "Data source: flowpipe, trajectory or gen")
      ->capture_default_str();
  plot_cmd->add_option("--enlarge", plot_args.enlarge,
                       "Total initial-box width as a fraction of |nominal| (0 = point)")
      ->capture_default_str();
  plot_cmd->add_option("--step", plot_args.step, "Time step [s]")->capture_default_str();
  plot_cmd->add_option("--horizon", plot_args.horizon, "Time horizon [s]")->capture_default_str();
  plot_cmd->add_option("--dims", plot_args.dims, "Projection plane, two of x, y, t")
      ->capture_default_str();
  plot_cmd->add_option("--file", plot_args.file, "GEN input file (--source gen)");
  plot_cmd->add_option("--format", plot_args.format, "Output format: svg or csv")
      ->capture_default_str();
  plot_cmd->add_flag("--with-trajectory", plot_args.with_trajectory,
                     "Overlay the nominal RK4 trajectory on a flowpipe plot");
  plot_cmd->add_option("--out", plot_args.out, "Output file (default: plot.svg / plot.csv)");
  plot_cmd->add_option("-o,--out-dir", plot_args.out_dir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_generate(gen_args);
    if (check_cmd->parsed()) return run_check(check_args);
    if (plot_cmd->parsed()) return run_plot(plot_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
