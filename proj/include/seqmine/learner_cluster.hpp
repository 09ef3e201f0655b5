#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqmine/linalg.hpp"
#include "seqmine/log_ingest.hpp"

namespace seqmine {

// One row per model of a learner: counts of construction, parameterization
// and simulation activities, models ordered earliest to latest.
struct PerModelFrequencies {
  std::string learner_id;
  Matrix counts;  // i x 3
};

// Rows ordered by model first-event time; zero-activity models keep a
// (0,0,0) row. Throws NoModels when the learner has none.
PerModelFrequencies per_model_frequencies(const std::vector<ModelRecord>& models,
                                          const std::string& learner_id);

enum class FeatureAggregation { Sum, Mean };

// Per-learner 5-feature rows: original model count, copied model count, and
// the three activity columns aggregated per `mode`. Rows are in ascending
// learner-id order; `learner_ids` is filled to match.
Matrix learner_features(const std::vector<ModelRecord>& models,
                        FeatureAggregation mode,
                        std::vector<std::string>& learner_ids);

struct Standardized {
  Matrix data;
  std::vector<double> means;
  std::vector<double> scales;          // population sd per column
  std::vector<bool> constant_columns;  // sd == 0; such columns map to zero
};

// Column z-scores with population sd. Throws TooFewLearners for < 2 rows.
Standardized standardize(const Matrix& features);

struct PcaModel {
  std::vector<double> means;             // copied from the standardizer
  std::vector<double> scales;
  Matrix components;                     // n_components x d, orthonormal rows
  std::vector<double> eigenvalues;       // descending, for retained components
  std::vector<double> explained_ratios;  // eigenvalue / total variance
};

// Eigendecomposition of the population covariance via cyclic Jacobi.
// Components are sorted by descending eigenvalue; each is oriented so its
// largest-magnitude entry is positive.
PcaModel pca(const Standardized& scaled, std::size_t n_components = 2);

// Row-wise inner products with the retained components.
Matrix project(const PcaModel& model, const Matrix& scaled);

// |loading| per (component, feature); importance[c][j] = |a_c[j]|.
std::vector<std::vector<double>> feature_importance(const PcaModel& model);

struct KMeansResult {
  std::size_t k = 0;
  Matrix centroids;
  std::vector<std::size_t> assignment;
  double sse = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  int best_restart = -1;
  std::vector<double> sse_history;  // per Lloyd iteration of the winning restart
};

// K-means++ seeding plus Lloyd iterations to an assignment fixpoint (or
// max_iter). Best of `restarts` by SSE, ties to the lowest restart index.
// Fully deterministic given the seed.
KMeansResult kmeans_pp(const Matrix& points, std::size_t k, std::uint64_t seed,
                       std::size_t restarts = 10, std::size_t max_iter = 300);

struct ElbowPoint {
  std::size_t k;
  double sse;
};

struct ElbowReport {
  std::vector<ElbowPoint> points;
  std::size_t largest_drop_k = 0;  // k with the largest relative SSE drop
};

ElbowReport elbow(const Matrix& points, std::size_t k_min, std::size_t k_max,
                  std::uint64_t seed, std::size_t restarts = 10);

struct EngagementGroup {
  std::string label;  // "A", "B", ... for kept groups; empty when excluded
  std::vector<std::size_t> member_rows;
  double pc1_centroid = 0.0;
  double pc2_centroid = 0.0;
  bool excluded = false;
};

// Flags singleton clusters as excluded; the rest are labeled A, B, ... in
// descending mean-PC1 order (A = most active).
std::vector<EngagementGroup> exclude_singletons(const KMeansResult& result,
                                                const Matrix& projected);

}  // namespace seqmine
