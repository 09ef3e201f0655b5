#include "seqmine/learner_cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "seqmine/rng.hpp"

namespace seqmine {

PerModelFrequencies per_model_frequencies(const std::vector<ModelRecord>& models,
                                          const std::string& learner_id) {
  std::vector<const ModelRecord*> mine;
  for (const auto& m : models)
    if (m.learner_id == learner_id) mine.push_back(&m);
  if (mine.empty()) throw NoModels("per_model_frequencies: learner has no models");

  std::sort(mine.begin(), mine.end(), [](const ModelRecord* a, const ModelRecord* b) {
    if (a->first_ts != b->first_ts) return a->first_ts < b->first_ts;
    return a->first_pos < b->first_pos;
  });

  PerModelFrequencies out;
  out.learner_id = learner_id;
  out.counts = Matrix(mine.size(), 3);
  for (std::size_t i = 0; i < mine.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      out.counts.at(i, j) = static_cast<double>(mine[i]->activity_counts[j]);
  return out;
}

Matrix learner_features(const std::vector<ModelRecord>& models, FeatureAggregation mode,
                        std::vector<std::string>& learner_ids) {
  struct Row {
    double original = 0.0;
    double copied = 0.0;
    std::array<double, 3> activity{0.0, 0.0, 0.0};
    std::size_t model_count = 0;
  };
  std::map<std::string, Row> rows;
  for (const auto& m : models) {
    Row& r = rows[m.learner_id];
    if (m.is_copied)
      r.copied += 1.0;
    else
      r.original += 1.0;
    for (std::size_t j = 0; j < 3; ++j)
      r.activity[j] += static_cast<double>(m.activity_counts[j]);
    ++r.model_count;
  }

  Matrix t(rows.size(), 5);
  learner_ids.clear();
  learner_ids.reserve(rows.size());
  std::size_t i = 0;
  for (const auto& [id, r] : rows) {
    learner_ids.push_back(id);
    t.at(i, 0) = r.original;
    t.at(i, 1) = r.copied;
    for (std::size_t j = 0; j < 3; ++j) {
      t.at(i, 2 + j) = mode == FeatureAggregation::Sum
                           ? r.activity[j]
                           : r.activity[j] / static_cast<double>(r.model_count);
    }
    ++i;
  }
  return t;
}

Standardized standardize(const Matrix& features) {
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  if (n < 2) throw TooFewLearners("standardize: need at least 2 rows");

  Standardized out;
  out.means.assign(d, 0.0);
  out.scales.assign(d, 0.0);
  out.constant_columns.assign(d, false);
  out.data = Matrix(n, d);

  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += features.at(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = features.at(i, j) - mean;
      ss += diff * diff;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    out.means[j] = mean;
    out.scales[j] = sd;
    if (sd == 0.0) {
      out.constant_columns[j] = true;
      for (std::size_t i = 0; i < n; ++i) out.data.at(i, j) = 0.0;
    } else {
      for (std::size_t i = 0; i < n; ++i) out.data.at(i, j) = (features.at(i, j) - mean) / sd;
    }
  }
  return out;
}

PcaModel pca(const Standardized& scaled, std::size_t n_components) {
  const Matrix& x = scaled.data;
  if (x.rows < 2) throw TooFewLearners("pca: need at least 2 rows");
  if (n_components < 1 || n_components > x.cols)
    throw DimensionMismatch("pca: n_components outside [1, d]");

  const Matrix cov = covariance_matrix(x);
  EigenDecomposition eig = jacobi_eigen_symmetric(cov);

  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);

  PcaModel model;
  model.means = scaled.means;
  model.scales = scaled.scales;
  model.components = Matrix(n_components, x.cols);
  model.eigenvalues.resize(n_components);
  model.explained_ratios.resize(n_components);
  for (std::size_t c = 0; c < n_components; ++c) {
    // Orient so the largest-magnitude entry is positive.
    std::size_t arg = 0;
    for (std::size_t j = 1; j < x.cols; ++j)
      if (std::fabs(eig.vectors.at(c, j)) > std::fabs(eig.vectors.at(c, arg))) arg = j;
    const double flip = eig.vectors.at(c, arg) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < x.cols; ++j)
      model.components.at(c, j) = flip * eig.vectors.at(c, j);
    model.eigenvalues[c] = eig.values[c];
    model.explained_ratios[c] = total > 0.0 ? std::max(eig.values[c], 0.0) / total : 0.0;
  }
  return model;
}

Matrix project(const PcaModel& model, const Matrix& scaled) {
  if (scaled.cols != model.components.cols)
    throw DimensionMismatch("project: column count does not match the model");

  Matrix out(scaled.rows, model.components.rows);
  for (std::size_t i = 0; i < scaled.rows; ++i)
    for (std::size_t c = 0; c < model.components.rows; ++c) {
      double dot = 0.0;
      for (std::size_t j = 0; j < scaled.cols; ++j)
        dot += scaled.at(i, j) * model.components.at(c, j);
      out.at(i, c) = dot;
    }
  return out;
}

std::vector<std::vector<double>> feature_importance(const PcaModel& model) {
  std::vector<std::vector<double>> importance(model.components.rows);
  for (std::size_t c = 0; c < model.components.rows; ++c) {
    importance[c].resize(model.components.cols);
    for (std::size_t j = 0; j < model.components.cols; ++j)
      importance[c][j] = std::fabs(model.components.at(c, j));
  }
  return importance;
}

namespace {

double squared_distance(const Matrix& points, std::size_t row, const Matrix& centroids,
                        std::size_t c) {
  double ss = 0.0;
  for (std::size_t j = 0; j < points.cols; ++j) {
    const double d = points.at(row, j) - centroids.at(c, j);
    ss += d * d;
  }
  return ss;
}

struct LloydRun {
  Matrix centroids;
  std::vector<std::size_t> assignment;
  double sse = 0.0;
  std::size_t iterations = 0;
  std::vector<double> sse_history;
};

LloydRun run_once(const Matrix& points, std::size_t k, Rng& rng, std::size_t max_iter) {
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;

  // K-means++ seeding: first centroid uniform, the rest D^2-weighted.
  Matrix centroids(k, d);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);

  std::size_t first = rng.uniform_index(n);
  chosen[first] = true;
  for (std::size_t j = 0; j < d; ++j) centroids.at(0, j) = points.at(first, j);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], squared_distance(points, i, centroids, c - 1));
      total += dist2[i];
    }
    std::size_t pick;
    if (total > 0.0) {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (target < acc) {
          pick = i;
          break;
        }
      }
    } else {
      // All mass at distance zero (duplicate-heavy data): take the first
      // point not already chosen so seeding still yields k centroids.
      pick = 0;
      while (pick < n && chosen[pick]) ++pick;
      if (pick == n) pick = rng.uniform_index(n);
    }
    chosen[pick] = true;
    for (std::size_t j = 0; j < d; ++j) centroids.at(c, j) = points.at(pick, j);
  }

  LloydRun run;
  run.centroids = std::move(centroids);
  run.assignment.assign(n, 0);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // Assignment step; ties go to the lowest centroid index.
    bool changed = false;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(points, i, run.centroids, 0);
      for (std::size_t c = 1; c < k; ++c) {
        const double dd = squared_distance(points, i, run.centroids, c);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
      sse += best_d;
    }
    run.sse = sse;
    run.sse_history.push_back(sse);
    run.iterations = iter + 1;
    if (!changed && iter > 0) break;

    // Update step.
    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[run.assignment[i]];
      for (std::size_t j = 0; j < d; ++j) sums.at(run.assignment[i], j) += points.at(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        run.centroids.at(c, j) = sums.at(c, j) / static_cast<double>(counts[c]);
    }

    // Re-seed empty clusters on the point farthest from its own centroid;
    // the next assignment pass folds the move in.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t farthest = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.assignment[i]] <= 1) continue;  // do not strand another cluster
        const double dd = squared_distance(points, i, run.centroids, run.assignment[i]);
        if (dd > far_d) {
          far_d = dd;
          farthest = i;
        }
      }
      if (farthest == n) continue;
      --counts[run.assignment[farthest]];
      run.assignment[farthest] = c;
      counts[c] = 1;
      for (std::size_t j = 0; j < d; ++j) run.centroids.at(c, j) = points.at(farthest, j);
    }
  }
  return run;
}

}  // namespace

KMeansResult kmeans_pp(const Matrix& points, std::size_t k, std::uint64_t seed,
                       std::size_t restarts, std::size_t max_iter) {
  if (k < 1 || k > points.rows) throw BadK("kmeans_pp: k must be in [1, n]");
  if (restarts < 1) throw BadK("kmeans_pp: need at least one restart");

  KMeansResult best;
  best.seed = seed;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, r));
    LloydRun run = run_once(points, k, rng, max_iter);
    if (best.best_restart < 0 || run.sse < best.sse) {
      best.k = k;
      best.centroids = std::move(run.centroids);
      best.assignment = std::move(run.assignment);
      best.sse = run.sse;
      best.iterations = run.iterations;
      best.best_restart = static_cast<int>(r);
      best.sse_history = std::move(run.sse_history);
    }
  }
  return best;
}

ElbowReport elbow(const Matrix& points, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                  std::size_t restarts) {
  if (k_min < 1 || k_max > points.rows || k_min > k_max)
    throw BadK("elbow: k range must lie within [1, n]");

  ElbowReport report;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const KMeansResult r = kmeans_pp(points, k, mix_seed(seed, 1000 + k), restarts);
    report.points.push_back({k, r.sse});
  }

  double best_drop = -1.0;
  for (std::size_t i = 1; i < report.points.size(); ++i) {
    const double prev = report.points[i - 1].sse;
    if (prev <= 0.0) continue;
    const double drop = (prev - report.points[i].sse) / prev;
    if (drop > best_drop) {
      best_drop = drop;
      report.largest_drop_k = report.points[i].k;
    }
  }
  return report;
}

std::vector<EngagementGroup> exclude_singletons(const KMeansResult& result,
                                                const Matrix& projected) {
  std::vector<EngagementGroup> groups(result.k);
  for (std::size_t i = 0; i < result.assignment.size(); ++i)
    groups[result.assignment[i]].member_rows.push_back(i);

  for (auto& g : groups) {
    double pc1 = 0.0, pc2 = 0.0;
    for (std::size_t row : g.member_rows) {
      pc1 += projected.at(row, 0);
      if (projected.cols > 1) pc2 += projected.at(row, 1);
    }
    const double n = static_cast<double>(std::max<std::size_t>(g.member_rows.size(), 1));
    g.pc1_centroid = pc1 / n;
    g.pc2_centroid = pc2 / n;
    g.excluded = g.member_rows.size() <= 1;
  }

  // Drop truly empty clusters (possible when k-means leaves one unused).
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const EngagementGroup& g) { return g.member_rows.empty(); }),
               groups.end());

  std::stable_sort(groups.begin(), groups.end(),
                   [](const EngagementGroup& a, const EngagementGroup& b) {
                     return a.pc1_centroid > b.pc1_centroid;
                   });
  char next = 'A';
  for (auto& g : groups)
    if (!g.excluded) g.label = std::string(1, next++);
  return groups;
}

}  // namespace seqmine
