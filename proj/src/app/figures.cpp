#include "app/figures.hpp"

#include <algorithm>
#include <cmath>

#include "seqmine/svg.hpp"

namespace seqmine::app {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 46.0;

double plot_w() { return kWidth - kMarginLeft - kMarginRight; }
double plot_h() { return kHeight - kMarginTop - kMarginBottom; }

void draw_frame(SvgCanvas& svg, const std::string& title, const std::string& x_label,
                const std::string& y_label) {
  svg.rect(kMarginLeft, kMarginTop, plot_w(), plot_h(), "none", "#888");
  svg.text(kWidth / 2.0, kMarginTop - 12.0, title, 13.0, "middle");
  if (!x_label.empty()) svg.text(kWidth / 2.0, kHeight - 10.0, x_label, 11.0, "middle");
  if (!y_label.empty()) svg.text(14.0, kMarginTop - 12.0, y_label, 11.0, "start");
}

struct NodePosition {
  double x = 0.0;
  double height = 0.0;
};

}  // namespace

void render_dendrogram_svg(const std::filesystem::path& path, const Dendrogram& dendrogram,
                           const std::string& title) {
  const std::size_t n = dendrogram.n_leaves;
  SvgCanvas svg(kWidth, kHeight);
  draw_frame(svg, title, "sequences", "linkage distance");

  if (n == 0) {
    svg.write_file(path.string());
    return;
  }

  // Leaf order via depth-first traversal from the final merge.
  std::vector<std::size_t> leaf_order;
  leaf_order.reserve(n);
  if (n == 1) {
    leaf_order.push_back(0);
  } else {
    std::vector<std::size_t> stack{2 * n - 2};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (id < n) {
        leaf_order.push_back(id);
      } else {
        const Merge& m = dendrogram.merges[id - n];
        stack.push_back(m.right);
        stack.push_back(m.left);
      }
    }
  }

  double max_height = 1.0;
  for (const auto& m : dendrogram.merges) max_height = std::max(max_height, m.height);

  auto x_of_leaf = [&](std::size_t position) {
    return kMarginLeft + plot_w() * (static_cast<double>(position) + 0.5) /
                             static_cast<double>(n);
  };
  auto y_of_height = [&](double h) {
    return kMarginTop + plot_h() * (1.0 - h / (max_height * 1.05));
  };

  std::vector<NodePosition> nodes(2 * n - 1);
  for (std::size_t pos = 0; pos < leaf_order.size(); ++pos)
    nodes[leaf_order[pos]] = {x_of_leaf(pos), 0.0};

  for (std::size_t t = 0; t < dendrogram.merges.size(); ++t) {
    const Merge& m = dendrogram.merges[t];
    const NodePosition& a = nodes[m.left];
    const NodePosition& b = nodes[m.right];
    const double y = y_of_height(m.height);
    svg.line(a.x, y_of_height(a.height), a.x, y, "#1f77b4", 1.0);
    svg.line(b.x, y_of_height(b.height), b.x, y, "#1f77b4", 1.0);
    svg.line(a.x, y, b.x, y, "#1f77b4", 1.0);
    nodes[n + t] = {(a.x + b.x) / 2.0, m.height};
  }

  // Height axis ticks.
  for (int tick = 0; tick <= 4; ++tick) {
    const double h = max_height * tick / 4.0;
    const double y = y_of_height(h);
    svg.line(kMarginLeft - 4.0, y, kMarginLeft, y, "#888", 1.0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", h);
    svg.text(kMarginLeft - 8.0, y + 4.0, buf, 10.0, "end");
  }
  svg.write_file(path.string());
}

void render_scatter_svg(const std::filesystem::path& path,
                        const std::vector<ScatterPoint>& points,
                        const std::vector<std::string>& series_labels, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  SvgCanvas svg(kWidth, kHeight);
  draw_frame(svg, title, x_label, y_label);

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  if (!points.empty()) {
    x_min = x_max = points.front().x;
    y_min = y_max = points.front().y;
    for (const auto& p : points) {
      x_min = std::min(x_min, p.x);
      x_max = std::max(x_max, p.x);
      y_min = std::min(y_min, p.y);
      y_max = std::max(y_max, p.y);
    }
  }
  const double x_span = x_max - x_min > 0.0 ? x_max - x_min : 1.0;
  const double y_span = y_max - y_min > 0.0 ? y_max - y_min : 1.0;

  const auto& palette = svg_palette();
  for (const auto& p : points) {
    const double px = kMarginLeft + plot_w() * ((p.x - x_min) / x_span * 0.92 + 0.04);
    const double py = kMarginTop + plot_h() * (1.0 - ((p.y - y_min) / y_span * 0.92 + 0.04));
    svg.circle(px, py, 3.0, palette[p.series % palette.size()]);
  }
  for (std::size_t s = 0; s < series_labels.size(); ++s) {
    const double lx = kMarginLeft + 12.0;
    const double ly = kMarginTop + 16.0 + 16.0 * static_cast<double>(s);
    svg.circle(lx, ly - 4.0, 4.0, palette[s % palette.size()]);
    svg.text(lx + 10.0, ly, series_labels[s], 11.0);
  }
  svg.write_file(path.string());
}

void render_elbow_svg(const std::filesystem::path& path,
                      const std::vector<std::pair<double, double>>& k_sse,
                      const std::string& title) {
  SvgCanvas svg(kWidth, kHeight);
  draw_frame(svg, title, "k", "total within-group SSE");
  if (k_sse.empty()) {
    svg.write_file(path.string());
    return;
  }

  double k_min = k_sse.front().first, k_max = k_sse.back().first;
  double sse_max = 1.0;
  for (const auto& [k, sse] : k_sse) sse_max = std::max(sse_max, sse);
  const double k_span = k_max - k_min > 0.0 ? k_max - k_min : 1.0;

  std::vector<std::pair<double, double>> path_points;
  for (const auto& [k, sse] : k_sse) {
    const double px = kMarginLeft + plot_w() * ((k - k_min) / k_span * 0.92 + 0.04);
    const double py = kMarginTop + plot_h() * (1.0 - sse / (sse_max * 1.05));
    path_points.emplace_back(px, py);
  }
  svg.polyline(path_points);
  for (const auto& [px, py] : path_points) svg.circle(px, py, 3.0, "#1f77b4");
  for (const auto& [k, sse] : k_sse) {
    const double px = kMarginLeft + plot_w() * ((k - k_min) / k_span * 0.92 + 0.04);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%g", k);
    svg.text(px, kHeight - kMarginBottom + 16.0, buf, 10.0, "middle");
  }
  svg.write_file(path.string());
}

BoxStats box_stats(const std::string& label, std::vector<double> values) {
  BoxStats b;
  b.label = label;
  if (values.empty()) return b;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
  };
  b.min = values.front();
  b.max = values.back();
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  for (double v : values) b.mean += v;
  b.mean /= static_cast<double>(values.size());
  return b;
}

void render_boxplot_svg(const std::filesystem::path& path, const std::vector<BoxStats>& boxes,
                        const std::string& title, const std::string& y_label) {
  SvgCanvas svg(kWidth, kHeight);
  draw_frame(svg, title, "", y_label);
  if (boxes.empty()) {
    svg.write_file(path.string());
    return;
  }

  double v_max = 1.0;
  for (const auto& b : boxes) v_max = std::max(v_max, b.max);
  auto y_of = [&](double v) { return kMarginTop + plot_h() * (1.0 - v / (v_max * 1.08)); };

  const double slot = plot_w() / static_cast<double>(boxes.size());
  const auto& palette = svg_palette();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoxStats& b = boxes[i];
    const double cx = kMarginLeft + slot * (static_cast<double>(i) + 0.5);
    const double half = slot * 0.22;
    const std::string& color = palette[i % palette.size()];
    svg.line(cx, y_of(b.min), cx, y_of(b.q1), "#555", 1.0);
    svg.line(cx, y_of(b.q3), cx, y_of(b.max), "#555", 1.0);
    svg.line(cx - half * 0.6, y_of(b.min), cx + half * 0.6, y_of(b.min), "#555", 1.0);
    svg.line(cx - half * 0.6, y_of(b.max), cx + half * 0.6, y_of(b.max), "#555", 1.0);
    svg.rect(cx - half, y_of(b.q3), 2.0 * half, y_of(b.q1) - y_of(b.q3), "none", color);
    svg.line(cx - half, y_of(b.median), cx + half, y_of(b.median), color, 2.0);
    svg.circle(cx, y_of(b.mean), 2.5, "#d62728");
    svg.text(cx, kHeight - kMarginBottom + 16.0, b.label, 10.0, "middle");
  }

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = v_max * tick / 4.0;
    const double y = y_of(v);
    svg.line(kMarginLeft - 4.0, y, kMarginLeft, y, "#888", 1.0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    svg.text(kMarginLeft - 8.0, y + 4.0, buf, 10.0, "end");
  }
  svg.write_file(path.string());
}

}  // namespace seqmine::app
