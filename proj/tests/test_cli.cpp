// End-to-end checks of the command line tool: runs the real binary in a
// scratch directory and inspects exit codes, files, and determinism.
// Usage: sinex_cli_tests <path-to-cli> <scratch-dir>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sinex/analysis.hpp"
#include "sinex/sine_builder.hpp"
#include "sinex/sx_io.hpp"

namespace fs = std::filesystem;

namespace {

#define REQUIRE(cond, msg)                                                       \
  do {                                                                           \
    if (!(cond)) {                                                               \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg << "\n"; \
      std::exit(1);                                                              \
    }                                                                            \
  } while (0)

std::string cli;
fs::path scratch;

int run(const std::string& args, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string cmd = "\"" + cli + "\" " + args + " >\"" + (dir / "out.txt").string() +
                          "\" 2>\"" + (dir / "err.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1, "system() failed");
  REQUIRE(WIFEXITED(status), "tool did not exit normally: " + cmd);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good(), "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void pass(const std::string& name) { std::cout << "[PASS] " << name << "\n"; }

void test_generate_golden() {
  const fs::path dir = scratch / "generate";
  const int code = run("generate -A 0.5 -w 1 -m 2 -o \"" + dir.string() + "\"", dir);
  REQUIRE(code == 0, "generate exit code " + std::to_string(code));

  const std::string golden = slurp(fs::path(SINEX_GOLDEN_DIR) / "model_reference.xml");
  REQUIRE(slurp(dir / "model.xml") == golden, "model.xml differs from the golden document");

  const std::string cfg = slurp(dir / "model.cfg");
  const std::string want_cfg =
      "system = system\n"
      "initially = \"sin_1.x==-0.5 & y==2 & sin_1.t==0 & t_gl==0\"\n"
      "scenario = stc\n"
      "flowpipe-tolerance = 0.01\n"
      "time-horizon = 10\n"
      "iter-max = -1\n"
      "output-variables = t_gl, y\n"
      "output-format = GEN\n";
  REQUIRE(cfg == want_cfg, "model.cfg differs from the expected text");

  const std::string out = slurp(dir / "out.txt");
  REQUIRE(out.find("x0 = -0.5") != std::string::npos, "stdout lacks x0");
  REQUIRE(out.find("y0 = 2") != std::string::npos, "stdout lacks y0");

  const std::string manifest = slurp(dir / "manifest.json");
  REQUIRE(manifest.find("\"command\": \"generate\"") != std::string::npos, "manifest command");
  REQUIRE(manifest.find("\"tool\": \"sinex\"") != std::string::npos, "manifest tool");
  REQUIRE(manifest.find("model.xml") != std::string::npos, "manifest outputs");
  REQUIRE(manifest.find("\"duration_seconds\"") != std::string::npos, "manifest duration");
  pass("generate writes the golden model.xml and model.cfg");
}

void test_generate_deterministic() {
  const fs::path a = scratch / "det_a";
  const fs::path b = scratch / "det_b";
  REQUIRE(run("generate -A 3 -w 0.25 -m -1 -p 0.5 --enlarge 0.1 -o \"" + a.string() + "\"", a) ==
              0,
          "generate a");
  REQUIRE(run("generate -A 3 -w 0.25 -m -1 -p 0.5 --enlarge 0.1 -o \"" + b.string() + "\"", b) ==
              0,
          "generate b");
  REQUIRE(slurp(a / "model.xml") == slurp(b / "model.xml"), "model.xml not deterministic");
  REQUIRE(slurp(a / "model.cfg") == slurp(b / "model.cfg"), "model.cfg not deterministic");
  pass("generate output is byte deterministic");
}

void test_check_pass() {
  const fs::path dir = scratch / "check_pass";
  const int code = run(
      "check -A 10 -w 0.5 -m 20 --enlarge 0.2 --step 0.01 --horizon 10 -o \"" + dir.string() +
          "\"",
      dir);
  REQUIRE(code == 0, "check exit code " + std::to_string(code));
  const std::string report = slurp(dir / "report.json");
  REQUIRE(report.find("\"contained\": true") != std::string::npos, "report not contained");
  REQUIRE(report.find("\"ok\": true") != std::string::npos, "conservation not ok");
  const std::string out = slurp(dir / "out.txt");
  REQUIRE(out.find("contained = true") != std::string::npos, "stdout lacks contained");
  pass("check accepts the faithful encoding (exit 0)");
}

void test_check_detects_mismatch() {
  const fs::path dir = scratch / "check_fail";
  const int code =
      run("check -A 0.5 -w 1 -m 2 --sim-omega 1.25 -o \"" + dir.string() + "\"", dir);
  REQUIRE(code == 1, "mismatch exit code " + std::to_string(code) + ", expected 1");
  const std::string report = slurp(dir / "report.json");
  REQUIRE(report.find("\"contained\": false") != std::string::npos, "report claims containment");
  REQUIRE(report.find("\"first_violation\": {") != std::string::npos, "no violation recorded");
  pass("check reports a frequency mismatch (exit 1)");
}

void test_usage_errors() {
  const fs::path dir = scratch / "usage";
  REQUIRE(run("", dir) == 2, "bare invocation should exit 2");
  REQUIRE(run("frobnicate", dir) == 2, "unknown subcommand should exit 2");
  REQUIRE(run("generate --no-such-flag", dir) == 2, "unknown flag should exit 2");
  REQUIRE(run("generate -A 1", dir) == 2, "missing omega should exit 2");
  REQUIRE(run("generate -A 1 -w 0", dir) == 2, "zero omega should exit 2");
  REQUIRE(run("generate --simulink -A 1", dir) == 2, "simulink without frequency should exit 2");
  REQUIRE(run("generate --simulink -A 1 --frequency 2 --sample-time 0.1", dir) == 2,
          "nonzero sample time should exit 2");
  REQUIRE(run("generate --simulink -A 1 --frequency 2 --sine-type sample_based", dir) == 2,
          "sample based mode should exit 2");
  REQUIRE(run("check -A 1 -w 1 --step -0.5", dir) == 2, "negative step should exit 2");
  REQUIRE(run("plot --source nowhere -A 1 -w 1", dir) == 2, "unknown source should exit 2");
  REQUIRE(run("plot --source gen", dir) == 2, "gen source without file should exit 2");
  REQUIRE(run("plot --source gen --file /nonexistent.gen", dir) == 2,
          "unreadable file should exit 2");
  REQUIRE(run("plot -A 1 -w 1 --dims t,t", dir) == 2, "repeated dims should exit 2");
  const std::string err = slurp(dir / "err.txt");
  REQUIRE(!err.empty(), "usage errors must say something on stderr");
  pass("usage errors exit 2 with a message");
}

void test_help_and_version() {
  const fs::path dir = scratch / "help";
  REQUIRE(run("--help", dir) == 0, "--help should exit 0");
  REQUIRE(slurp(dir / "out.txt").find("generate") != std::string::npos, "help lists generate");
  REQUIRE(run("--version", dir) == 0, "--version should exit 0");
  REQUIRE(slurp(dir / "out.txt").find("0.1.0") != std::string::npos, "version text");
  REQUIRE(run("check --help", dir) == 0, "subcommand help should exit 0");
  pass("help and version exit 0");
}

void test_simulink_matches_native() {
  const fs::path a = scratch / "simulink_a";
  const fs::path b = scratch / "simulink_b";
  REQUIRE(run("generate -A 10 -w 0.5 -m 20 -o \"" + a.string() + "\"", a) == 0, "native");
  REQUIRE(run("generate --simulink -A 10 --frequency 0.5 -m 20 -o \"" + b.string() + "\"", b) ==
              0,
          "simulink");
  REQUIRE(slurp(a / "model.xml") == slurp(b / "model.xml"),
          "simulink flags must produce the native model");
  pass("simulink flag vocabulary maps onto the native one");
}

void test_plot_csv_geometric() {
  const fs::path dir = scratch / "plot_csv";
  const int code = run(
      "plot --source flowpipe -A 10 -w 0.5 -m 20 --enlarge 0.2 --step 0.05 --horizon 5 "
      "--dims x,y --format csv -o \"" +
          dir.string() + "\"",
      dir);
  REQUIRE(code == 0, "plot exit code " + std::to_string(code));

  const std::string csv = slurp(dir / "plot.csv");
  const std::vector<sinex::Polygon> polys = sinex::parse_gen(csv);
  REQUIRE(polys.size() == 100, "expected 100 polygons, got " + std::to_string(polys.size()));

  // Geometric recheck in data space: every sample of the nominal trajectory,
  // computed independently of the CLI, lies in the polygon of its segment.
  const sinex::SineParams p = sinex::make_sine_params(10.0, 0.5, 20.0, 0.0);
  const sinex::InitState init = sinex::initial_conditions(p);
  const sinex::Trajectory sim = sinex::simulate(p, {init.x0, init.y0, 0.0}, 0.05, 5.0);
  for (const sinex::TrajectorySample& s : sim.samples) {
    const std::size_t k = std::min<std::size_t>(
        static_cast<std::size_t>(s.time / 0.05), polys.size() - 1);
    REQUIRE(oracle::in_convex_polygon(polys[k].vertices, s.state.x, s.state.y, 1e-9),
            "sample at t = " + std::to_string(s.time) + " escapes its polygon");
  }

  // Exact oracle states from box corners must also be covered by the union.
  const sinex::StateBox box = sinex::enlarge_initial(init, 0.2);
  for (double cx : {box.x.lo, box.x.hi})
    for (double cy : {box.y.lo, box.y.hi})
      for (double tau : {0.0, 1.23, 2.5, 4.99}) {
        const sinex::StateVector s =
            oracle::advance(p.omega, p.bias, {cx, cy, 0.0}, tau);
        REQUIRE(oracle::in_any_polygon(polys, s.x, s.y, 1e-9),
                "corner trajectory escapes the union at tau = " + std::to_string(tau));
      }
  pass("plot CSV is sound against independent trajectories");
}

void test_plot_csv_roundtrip_via_gen_source() {
  const fs::path dir = scratch / "plot_regen";
  REQUIRE(run("plot --source trajectory -A 0.5 -w 1 -m 2 --step 0.5 --horizon 5 --dims t,y "
              "--format csv -o \"" +
                  dir.string() + "\"",
              dir) == 0,
          "trajectory csv");
  const std::string first = slurp(dir / "plot.csv");
  REQUIRE(run("plot --source gen --file \"" + (dir / "plot.csv").string() +
                  "\" --format csv --out \"" + (dir / "copy.csv").string() + "\" -o \"" +
                  dir.string() + "\"",
              dir) == 0,
          "gen csv");
  REQUIRE(slurp(dir / "copy.csv") == first, "gen source must re-emit identical bytes");
  pass("CSV survives a parse/emit pass through the tool");
}

void test_plot_svg() {
  const fs::path dir = scratch / "plot_svg";
  REQUIRE(run("plot --source flowpipe -A 0.5 -w 1 -m 2 --step 0.1 --horizon 3 --dims t,y "
              "--with-trajectory -o \"" +
                  dir.string() + "\"",
              dir) == 0,
          "plot svg");
  const std::string svg = slurp(dir / "plot.svg");
  REQUIRE(svg.rfind("<svg", 0) == 0, "not an svg document");
  REQUIRE(svg.find("<polygon") != std::string::npos, "svg lacks flowpipe polygons");
  REQUIRE(svg.find("<polyline") != std::string::npos, "svg lacks the trajectory overlay");
  REQUIRE(svg.find("</svg>") != std::string::npos, "svg not closed");

  const fs::path dir2 = scratch / "plot_svg2";
  REQUIRE(run("plot --source flowpipe -A 0.5 -w 1 -m 2 --step 0.1 --horizon 3 --dims t,y "
              "--with-trajectory -o \"" +
                  dir2.string() + "\"",
              dir2) == 0,
          "plot svg again");
  REQUIRE(slurp(dir2 / "plot.svg") == svg, "svg not deterministic");
  pass("plot SVG is well formed and deterministic");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: sinex_cli_tests <path-to-cli> <scratch-dir>\n";
    return 2;
  }
  cli = argv[1];
  scratch = argv[2];
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  test_generate_golden();
  test_generate_deterministic();
  test_check_pass();
  test_check_detects_mismatch();
  test_usage_errors();
  test_help_and_version();
  test_simulink_matches_native();
  test_plot_csv_geometric();
  test_plot_csv_roundtrip_via_gen_source();
  test_plot_svg();

  std::cout << "all cli tests passed\n";
  return 0;
}
