#pragma once

#include <string>
#include <vector>

namespace seqmine {

// Minimal deterministic SVG writer for the report figures. Coordinates are
// formatted with fixed precision so identical inputs give identical bytes.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  void line(double x1, double y1, double x2, double y2, const std::string& stroke = "#333",
            double stroke_width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke = "#1f77b4", double stroke_width = 1.5);
  void rect(double x, double y, double w, double h, const std::string& fill = "none",
            const std::string& stroke = "#333");
  void circle(double cx, double cy, double r, const std::string& fill = "#1f77b4");
  void text(double x, double y, const std::string& content, double size = 11.0,
            const std::string& anchor = "start");

  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  double width_;
  double height_;
  std::string body_;
};

// A small qualitative palette shared by the figures.
const std::vector<std::string>& svg_palette();

}  // namespace seqmine
