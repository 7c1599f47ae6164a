#include "sinex/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sinex/errors.hpp"
#include "sinex/numfmt.hpp"

namespace sinex {

namespace {

struct Bounds {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool any = false;

  void grow(const Point2& p) {
    if (!any) {
      xmin = xmax = p.x;
      ymin = ymax = p.y;
      any = true;
      return;
    }
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
};

// Data -> pixel, y axis flipped.
struct Mapper {
  Bounds b;
  double px0, py0, sx, sy;

  Mapper(Bounds bounds, const PlotStyle& st) : b(bounds) {
    if (b.xmax - b.xmin <= 0.0) {
      b.xmin -= 0.5;
      b.xmax += 0.5;
    }
    if (b.ymax - b.ymin <= 0.0) {
      b.ymin -= 0.5;
      b.ymax += 0.5;
    }
    const double pad_x = 0.04 * (b.xmax - b.xmin);
    const double pad_y = 0.04 * (b.ymax - b.ymin);
    b.xmin -= pad_x;
    b.xmax += pad_x;
    b.ymin -= pad_y;
    b.ymax += pad_y;
    px0 = st.margin;
    py0 = st.height - st.margin;
    sx = (st.width - 2.0 * st.margin) / (b.xmax - b.xmin);
    sy = (st.height - 2.0 * st.margin) / (b.ymax - b.ymin);
  }

  double px(double x) const { return px0 + (x - b.xmin) * sx; }
  double py(double y) const { return py0 - (y - b.ymin) * sy; }
};

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  out += buf;
}

void append_points(std::string& out, const std::vector<Point2>& pts, const Mapper& map) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out.push_back(' ');
    append_num(out, map.px(pts[i].x));
    out.push_back(',');
    append_num(out, map.py(pts[i].y));
  }
}

std::string escape_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void append_label(std::string& out, double x, double y, const std::string& anchor,
                  const std::string& text) {
  out += "  <text x=\"";
  append_num(out, x);
  out += "\" y=\"";
  append_num(out, y);
  out += "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\" text-anchor=\"" +
         anchor + "\">" + escape_text(text) + "</text>\n";
}

}  // namespace

std::string render_plot_svg(const std::vector<Polygon>& polygons,
                            const std::vector<Point2>& polyline, const PlotStyle& style) {
  Bounds bounds;
  for (const Polygon& poly : polygons)
    for (const Point2& v : poly.vertices) bounds.grow(v);
  for (const Point2& v : polyline) bounds.grow(v);
  if (!bounds.any) throw InvalidArgument("nothing to plot");

  const Mapper map(bounds, style);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
  out += "  <rect width=\"" + std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" fill=\"#ffffff\"/>\n";

  for (const Polygon& poly : polygons) {
    if (poly.vertices.empty()) continue;
    out += "  <polygon points=\"";
    append_points(out, poly.vertices, map);
    out += "\" fill=\"#a6c8e0\" fill-opacity=\"0.55\" stroke=\"#5b8db8\" stroke-width=\"0.5\"/>\n";
  }

  if (!polyline.empty()) {
    out += "  <polyline points=\"";
    append_points(out, polyline, map);
    out += "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.2\"/>\n";
  }

  // Plot frame on top so dense polygon stacks do not hide it.
  out += "  <rect x=\"";
  append_num(out, map.px0);
  out += "\" y=\"";
  append_num(out, static_cast<double>(style.margin));
  out += "\" width=\"";
  append_num(out, static_cast<double>(style.width - 2 * style.margin));
  out += "\" height=\"";
  append_num(out, static_cast<double>(style.height - 2 * style.margin));
  out += "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  const double below = map.py0 + 16.0;
  append_label(out, map.px0, below, "start", format_double(map.b.xmin));
  append_label(out, style.width - style.margin, below, "end", format_double(map.b.xmax));
  append_label(out, map.px0 - 6.0, map.py0, "end", format_double(map.b.ymin));
  append_label(out, map.px0 - 6.0, style.margin + 10.0, "end", format_double(map.b.ymax));
  if (!style.x_label.empty())
    append_label(out, 0.5 * style.width, below + 16.0, "middle", style.x_label);
  if (!style.y_label.empty())
    append_label(out, map.px0 - 40.0, 0.5 * style.height, "middle", style.y_label);
  if (!style.title.empty())
    append_label(out, 0.5 * style.width, style.margin - 12.0, "middle", style.title);

  out += "</svg>\n";
  return out;
}

}  // namespace sinex
