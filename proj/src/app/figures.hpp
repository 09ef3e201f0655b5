#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "seqmine/seq_cluster.hpp"

namespace seqmine::app {

// Dendrogram with leaves on the x-axis and merge height on the y-axis.
void render_dendrogram_svg(const std::filesystem::path& path, const Dendrogram& dendrogram,
                           const std::string& title);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t series = 0;  // palette index
};

void render_scatter_svg(const std::filesystem::path& path, const std::vector<ScatterPoint>& points,
                        const std::vector<std::string>& series_labels, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

void render_elbow_svg(const std::filesystem::path& path,
                      const std::vector<std::pair<double, double>>& k_sse,
                      const std::string& title);

struct BoxStats {
  std::string label;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
};

BoxStats box_stats(const std::string& label, std::vector<double> values);

void render_boxplot_svg(const std::filesystem::path& path, const std::vector<BoxStats>& boxes,
                        const std::string& title, const std::string& y_label);

}  // namespace seqmine::app
