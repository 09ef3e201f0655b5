#include "seqmine/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace seqmine {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
  body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
           fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(stroke_width) +
           "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& points,
                         const std::string& stroke, double stroke_width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fmt(stroke_width) + "\" points=\"";
  for (const auto& [x, y] : points) body_ += fmt(x) + "," + fmt(y) + " ";
  body_ += "\"/>\n";
}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill,
                     const std::string& stroke) {
  body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" +
           fmt(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill) {
  body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) + "\" fill=\"" +
           fill + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, double size,
                     const std::string& anchor) {
  body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-size=\"" + fmt(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + escape(content) +
           "</text>\n";
}

std::string SvgCanvas::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" +
         fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n" + body_ +
         "</svg>\n";
}

void SvgCanvas::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str();
}

const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> palette{"#2ca02c", "#1f3a93", "#e6b800", "#7d3c98",
                                                "#d62728", "#17becf", "#8c564b", "#7f7f7f"};
  return palette;
}

}  // namespace seqmine
