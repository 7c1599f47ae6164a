#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sinex/model.hpp"
#include "sinex/sine_builder.hpp"

namespace sinex {

enum class Scenario { stc, lgg, supp };
enum class OutputFormat { gen, txt, intv };

std::string to_string(Scenario s);
std::string to_string(OutputFormat f);

struct AnalysisConfig {
  std::string system = "system";
  std::string initially;
  Scenario scenario = Scenario::stc;
  double flowpipe_tolerance = 0.01;
  double time_horizon = 10.0;
  int iter_max = -1;
  std::vector<std::string> output_variables{"t_gl", "y"};
  OutputFormat output_format = OutputFormat::gen;
};

/// Serializes the model as an SX document. Deterministic: equal models give
/// byte-identical text. Throws InvalidModelError when validate_model fails.
std::string emit_sx(const Model& m);

/// parse_sx keeps the model and a report of everything it had to drop
/// (transitions, invariants, notes, position attributes, unknown elements).
struct SxParseResult {
  Model model;
  ValidationReport report;
};

/// Inverse of emit_sx on the supported subset. Throws MalformedXmlError for
/// XML-level problems, UnsupportedSchemaError when the document is valid XML
/// but outside the subset (wrong root, unparseable flow, bad bind actual).
SxParseResult parse_sx(std::string_view doc);

/// Conjunction describing an initial box, with component-local variables
/// prefixed by the bind alias and the global clock pinned to 0.
std::string initially_predicate(const StateBox& init, const std::string& sine_alias = "sin_1",
                                const std::string& clock_var = "t_gl");

/// Fixed key order, `initially` double-quoted, trailing newline, no tabs.
std::string emit_cfg(const AnalysisConfig& c);

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Polygon {
  std::vector<Point2> vertices;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// GEN reachable-set format: one `x y` pair per line, blank lines separate
/// polygons, repeated/leading/trailing blanks tolerated. Throws GenParseError
/// (with line number) on any other line.
std::vector<Polygon> parse_gen(std::string_view doc);

/// One vertex per line, single blank line between polygons.
std::string emit_gen(const std::vector<Polygon>& polys);

}  // namespace sinex
