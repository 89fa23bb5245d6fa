#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsyz/polytope.hpp"

namespace torsyz {

// Minimal deterministic SVG writer for the 2-D figures. Every coordinate is
// printed with a fixed format so identical inputs give identical bytes.
class SvgFigure {
 public:
  SvgFigure(double x0, double y0, double x1, double y1, int pixels = 640) {
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("empty figure extent");
    double pad_x = 0.05 * (x1 - x0), pad_y = 0.05 * (y1 - y0);
    x0_ = x0 - pad_x;
    y0_ = y0 - pad_y;
    double span_x = (x1 - x0) + 2 * pad_x, span_y = (y1 - y0) + 2 * pad_y;
    scale_ = (pixels - 2.0 * kMargin) / (span_x > span_y ? span_x : span_y);
    w_ = static_cast<int>(span_x * scale_) + 2 * kMargin;
    h_ = static_cast<int>(span_y * scale_) + 2 * kMargin;
  }

  void comment(const std::string& text) {
    std::string safe = text;
    for (std::size_t i = 0; i + 1 < safe.size(); ++i)
      if (safe[i] == '-' && safe[i + 1] == '-') safe[i + 1] = ' ';
    body_ << "<!-- " << safe << " -->\n";
  }

  void outline(const std::vector<Point>& ring, const std::string& stroke = "#30343a") {
    poly_path(ring, true, stroke, "none");
  }

  void polyline(const std::vector<Point>& pts, const std::string& stroke = "#b3433b") {
    poly_path(pts, false, stroke, "none");
  }

  void dot(const Point& p, double radius = 2.5, const std::string& fill = "#1f4f9c") {
    body_ << "<circle cx=\"" << num(fx(to_double(p[0]))) << "\" cy=\"" << num(fy(to_double(p[1])))
          << "\" r=\"" << num(radius) << "\" fill=\"" << fill << "\"/>\n";
  }

  void square(const Point& corner, const Rat& side, const std::string& fill = "#d08a3e") {
    double x = to_double(corner[0]), y = to_double(corner[1]), s = to_double(side) * scale_;
    body_ << "<rect x=\"" << num(fx(x)) << "\" y=\"" << num(fy(y) - s) << "\" width=\"" << num(s)
          << "\" height=\"" << num(s) << "\" fill=\"" << fill
          << "\" fill-opacity=\"0.6\" stroke=\"#7a4a18\" stroke-width=\"0.5\"/>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
        << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
        << "<rect width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << str();
  }

 private:
  static constexpr int kMargin = 30;

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }

  double fx(double x) const { return (x - x0_) * scale_ + kMargin; }
  double fy(double y) const { return h_ - ((y - y0_) * scale_ + kMargin); }

  void poly_path(const std::vector<Point>& pts, bool close, const std::string& stroke,
                 const std::string& fill) {
    if (pts.empty()) return;
    body_ << "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
      body_ << (i == 0 ? "M" : " L") << num(fx(to_double(pts[i][0]))) << " "
            << num(fy(to_double(pts[i][1])));
    if (close) body_ << " Z";
    body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1.2\"/>\n";
  }

  double x0_ = 0, y0_ = 0, scale_ = 1;
  int w_ = 0, h_ = 0;
  std::ostringstream body_;
};

/// Figure spanning the bounding box of a 2-D polytope.
inline SvgFigure figure_for(const Polytope& p, int pixels = 640) {
  if (p.dim != 2) throw std::invalid_argument("figures are 2-D only");
  double x0 = to_double(p.vertices[0][0]), x1 = x0;
  double y0 = to_double(p.vertices[0][1]), y1 = y0;
  for (const auto& v : p.vertices) {
    double x = to_double(v[0]), y = to_double(v[1]);
    if (x < x0) x0 = x;
    if (x > x1) x1 = x;
    if (y < y0) y0 = y;
    if (y > y1) y1 = y;
  }
  return SvgFigure(x0, y0, x1, y1, pixels);
}

}  // namespace torsyz
