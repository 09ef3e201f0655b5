#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seqmine/learner_cluster.hpp"
#include "seqmine/log_ingest.hpp"
#include "seqmine/seq_cluster.hpp"
#include "seqmine/stats.hpp"

namespace seqmine::app {

struct CommonOptions {
  std::filesystem::path out_dir;
  unsigned threads = 1;
  bool timings = false;  // wall-clock timings make outputs nondeterministic, so opt-in
  bool svg = true;
};

struct IngestOptions {
  std::filesystem::path log_path;
  LogFormat format = LogFormat::Tsv;
};

struct SegmentOptions {
  double outlier_k = 2.0;
  bool sample_sd = false;
  std::optional<double> bandwidth;  // nullopt = Silverman
  std::size_t n_cuts = 2;
};

struct ClusterBehaviorsOptions {
  Linkage linkage = Linkage::Average;
  std::vector<std::size_t> group_k = {2, 2, 3};  // short / medium / long
  bool auto_k = false;                            // pick k by largest height gap instead
  std::size_t merge_target = 3;
  LabelThresholds thresholds;
};

struct ClusterLearnersOptions {
  FeatureAggregation aggregation = FeatureAggregation::Sum;
  std::size_t n_components = 2;
  std::size_t k = 5;
  std::size_t elbow_min = 1;
  std::size_t elbow_max = 10;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

struct QualityOptions {
  std::filesystem::path models_path;
  bool split_variety = false;
};

struct StatsOptions {
  TTestMode t_mode = TTestMode::Pooled;
  bool bonferroni = false;
  bool yates = false;
};

struct SynthOptions {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> cohort_config;  // JSON override of the default cohort
};

struct PipelineOptions {
  std::filesystem::path log_path;
  LogFormat format = LogFormat::Tsv;
  std::filesystem::path models_path;
  std::optional<std::filesystem::path> truth_path;  // enables eval.csv
  std::uint64_t seed = 0;
  SegmentOptions segment;
  ClusterBehaviorsOptions behaviors;
  ClusterLearnersOptions learners;
  StatsOptions stats;
};

void run_ingest(const CommonOptions& common, const IngestOptions& opts);
void run_segment(const CommonOptions& common, const SegmentOptions& opts);
void run_cluster_behaviors(const CommonOptions& common, const ClusterBehaviorsOptions& opts);
void run_cluster_learners(const CommonOptions& common, const ClusterLearnersOptions& opts);
void run_quality(const CommonOptions& common, const QualityOptions& opts);
void run_stats(const CommonOptions& common, const StatsOptions& opts);
void run_synth(const CommonOptions& common, const SynthOptions& opts);
void run_pipeline(const CommonOptions& common, const PipelineOptions& opts);

}  // namespace seqmine::app
