#pragma once

#include <string>
#include <vector>

#include "sinex/sx_io.hpp"

namespace sinex {

struct PlotStyle {
  int width = 880;
  int height = 640;
  int margin = 64;
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Standalone SVG document: the polygons share one fill color, the optional
/// polyline is drawn on top in a contrasting color. Byte-deterministic for
/// equal inputs; no timestamps or generator marks.
std::string render_plot_svg(const std::vector<Polygon>& polygons,
                            const std::vector<Point2>& polyline, const PlotStyle& style);

}  // namespace sinex
