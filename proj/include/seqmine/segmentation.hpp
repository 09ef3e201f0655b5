#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "seqmine/errors.hpp"

namespace seqmine {

struct OutlierBounds {
  double mean = 0.0;
  double sd = 0.0;  // population sd unless sample_sd requested
  double k = 2.0;
  double lower = 0.0;  // mean - k*sd
  double upper = 0.0;  // mean + k*sd
};

struct OutlierFilter {
  std::vector<std::size_t> retained;  // indices into the input, ascending
  std::vector<std::size_t> removed;
  OutlierBounds bounds;
};

// Removes lengths strictly outside [mean - k*sd, mean + k*sd]. Bounds are
// computed over the full input. k = +inf disables the filter. Throws
// TooFewSequences for fewer than 2 values.
OutlierFilter filter_outliers(const std::vector<std::size_t>& lengths, double k = 2.0,
                              bool sample_sd = false);

struct DensityEstimate {
  std::vector<double> grid;     // 512 ascending points
  std::vector<double> density;  // nonnegative, integrates to ~1
  double bandwidth = 0.0;
  std::vector<double> sample;   // sorted copy of the data (for quantile fallback)
};

inline constexpr std::size_t kKdeGridSize = 512;

// Gaussian-kernel density on a uniform 512-point grid over
// [min - 3h, max + 3h]. bandwidth == nullopt picks Silverman's rule
// h = 0.9 * min(sd, IQR/1.34) * n^(-1/5). Throws DegenerateData when the
// automatic rule degenerates (all values identical).
DensityEstimate kde(const std::vector<std::size_t>& lengths,
                    std::optional<double> bandwidth = std::nullopt);

struct CutPoints {
  std::vector<double> cuts;  // strictly ascending
  bool fallback = false;     // true when quantile fallback was used
};

// Interior strict local minima of the density, deepest n_cuts of them,
// reported in ascending grid position. Falls back to equal-count quantiles
// of the sample when fewer than n_cuts minima exist.
CutPoints find_cutpoints(const DensityEstimate& density, std::size_t n_cuts = 2);

enum class LengthGroup { Short, Medium, Long };

std::string_view to_string(LengthGroup group);

struct LengthSegments {
  double t1 = 0.0;
  double t2 = 0.0;
  std::vector<LengthGroup> assignment;  // parallel to the input lengths
  std::size_t short_count = 0;
  std::size_t medium_count = 0;
  std::size_t long_count = 0;
};

// Short: length < t1; Medium: t1 <= length < t2; Long: length >= t2.
LengthSegments segment(const std::vector<std::size_t>& lengths, double t1, double t2);

}  // namespace seqmine
