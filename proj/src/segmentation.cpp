#include "seqmine/segmentation.hpp"

#include <algorithm>
#include <cmath>

namespace seqmine {

namespace {

struct MeanSd {
  double mean;
  double sd;
};

MeanSd mean_sd(const std::vector<std::size_t>& values, bool sample) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (std::size_t v : values) mean += static_cast<double>(v);
  mean /= n;
  double ss = 0.0;
  for (std::size_t v : values) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  const double denom = sample ? n - 1.0 : n;
  return {mean, std::sqrt(ss / denom)};
}

// Linear-interpolation quantile of a sorted sample (the common "type 7").
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

OutlierFilter filter_outliers(const std::vector<std::size_t>& lengths, double k, bool sample_sd) {
  if (lengths.size() < 2) throw TooFewSequences("filter_outliers: need at least 2 lengths");

  const auto [mean, sd] = mean_sd(lengths, sample_sd);
  OutlierFilter out;
  out.bounds.mean = mean;
  out.bounds.sd = sd;
  out.bounds.k = k;
  if (std::isinf(k)) {
    out.bounds.lower = -std::numeric_limits<double>::infinity();
    out.bounds.upper = std::numeric_limits<double>::infinity();
  } else {
    out.bounds.lower = mean - k * sd;
    out.bounds.upper = mean + k * sd;
  }

  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double v = static_cast<double>(lengths[i]);
    if (v > out.bounds.upper || v < out.bounds.lower)
      out.removed.push_back(i);
    else
      out.retained.push_back(i);
  }
  return out;
}

DensityEstimate kde(const std::vector<std::size_t>& lengths, std::optional<double> bandwidth) {
  if (lengths.size() < 2) throw TooFewSequences("kde: need at least 2 values");

  std::vector<double> sample(lengths.begin(), lengths.end());
  std::sort(sample.begin(), sample.end());

  double h;
  if (bandwidth) {
    h = *bandwidth;
    if (!(h > 0.0)) throw DegenerateData("kde: bandwidth must be positive");
  } else {
    const auto [mean, sd] = mean_sd(lengths, false);
    (void)mean;
    const double iqr = quantile_sorted(sample, 0.75) - quantile_sorted(sample, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread == 0.0) spread = sd;  // robust Silverman: fall back when IQR collapses
    if (spread == 0.0) throw DegenerateData("kde: all values identical, cannot pick bandwidth");
    h = 0.9 * spread * std::pow(static_cast<double>(lengths.size()), -0.2);
  }

  DensityEstimate est;
  est.bandwidth = h;
  est.sample = std::move(sample);

  const double lo = est.sample.front() - 3.0 * h;
  const double hi = est.sample.back() + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(kKdeGridSize - 1);
  const double norm = 1.0 / (static_cast<double>(lengths.size()) * h * std::sqrt(2.0 * M_PI));

  est.grid.resize(kKdeGridSize);
  est.density.resize(kKdeGridSize);
  for (std::size_t g = 0; g < kKdeGridSize; ++g) {
    const double x = lo + step * static_cast<double>(g);
    double total = 0.0;
    for (double v : est.sample) {
      const double z = (x - v) / h;
      total += std::exp(-0.5 * z * z);
    }
    est.grid[g] = x;
    est.density[g] = norm * total;
  }
  return est;
}

CutPoints find_cutpoints(const DensityEstimate& density, std::size_t n_cuts) {
  if (n_cuts < 1) throw BadK("find_cutpoints: n_cuts must be >= 1");

  struct Minimum {
    std::size_t index;
    double value;
  };
  std::vector<Minimum> minima;
  for (std::size_t i = 1; i + 1 < density.density.size(); ++i) {
    if (density.density[i] < density.density[i - 1] && density.density[i] < density.density[i + 1])
      minima.push_back({i, density.density[i]});
  }

  CutPoints out;
  if (minima.size() >= n_cuts) {
    std::stable_sort(minima.begin(), minima.end(),
                     [](const Minimum& a, const Minimum& b) { return a.value < b.value; });
    minima.resize(n_cuts);
    std::sort(minima.begin(), minima.end(),
              [](const Minimum& a, const Minimum& b) { return a.index < b.index; });
    for (const auto& m : minima) out.cuts.push_back(density.grid[m.index]);
    return out;
  }

  // Not enough density valleys: fall back to an equal-count split. Collided
  // quantiles (heavily tied data) are nudged apart to keep cuts strictly
  // ascending.
  out.fallback = true;
  for (std::size_t j = 1; j <= n_cuts; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(n_cuts + 1);
    double cut = quantile_sorted(density.sample, p);
    if (!out.cuts.empty() && cut <= out.cuts.back()) cut = out.cuts.back() + 1.0;
    out.cuts.push_back(cut);
  }
  return out;
}

std::string_view to_string(LengthGroup group) {
  switch (group) {
    case LengthGroup::Short: return "short";
    case LengthGroup::Medium: return "medium";
    case LengthGroup::Long: return "long";
  }
  return "?";
}

LengthSegments segment(const std::vector<std::size_t>& lengths, double t1, double t2) {
  if (!(t1 < t2)) throw BadThresholds("segment: need t1 < t2");

  LengthSegments seg;
  seg.t1 = t1;
  seg.t2 = t2;
  seg.assignment.reserve(lengths.size());
  for (std::size_t v : lengths) {
    const double len = static_cast<double>(v);
    LengthGroup g;
    if (len < t1) {
      g = LengthGroup::Short;
      ++seg.short_count;
    } else if (len < t2) {
      g = LengthGroup::Medium;
      ++seg.medium_count;
    } else {
      g = LengthGroup::Long;
      ++seg.long_count;
    }
    seg.assignment.push_back(g);
  }
  return seg;
}

}  // namespace seqmine
