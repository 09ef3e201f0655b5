#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "app/commands.hpp"
#include "seqmine/version.hpp"

namespace {

using namespace seqmine;
using namespace seqmine::app;

struct Cli {
  CommonOptions common;
  IngestOptions ingest;
  SegmentOptions segment;
  ClusterBehaviorsOptions behaviors;
  ClusterLearnersOptions learners;
  QualityOptions quality;
  StatsOptions stats;
  SynthOptions synth;
  PipelineOptions pipeline;

  std::string format = "tsv";
  std::string linkage = "average";
  std::string aggregation = "sum";
  std::string t_mode = "pooled";
  double bandwidth = 0.0;  // 0 = Silverman
  std::string cohort_config;
  std::string truth;
  bool no_svg = false;
  bool sample_sd = false;
};

void add_common(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--out", cli.common.out_dir, "Output directory")->required();
  cmd->add_option("--threads", cli.common.threads, "Worker threads for pairwise distances");
  cmd->add_flag("--timings", cli.common.timings,
                "Record wall-clock timings in stage metadata (not byte-reproducible)");
  cmd->add_flag("--no-svg", cli.no_svg, "Skip SVG figure output");
}

void add_segment_options(CLI::App* cmd, Cli& cli, SegmentOptions& opts) {
  cmd->add_option("--outlier-k", opts.outlier_k, "Outlier window half-width in SDs (inf = off)");
  cmd->add_flag("--sample-sd", cli.sample_sd, "Use sample SD (n-1) for outlier bounds");
  cmd->add_option("--bandwidth", cli.bandwidth, "KDE bandwidth (0 = Silverman's rule)");
  cmd->add_option("--n-cuts", opts.n_cuts, "Number of density cut points");
}

void add_behavior_options(CLI::App* cmd, Cli& cli, ClusterBehaviorsOptions& opts) {
  cmd->add_option("--linkage", cli.linkage, "single | complete | average");
  cmd->add_option("--group-k", opts.group_k, "Clusters per length group (short medium long)")
      ->expected(3);
  cmd->add_flag("--auto-k", opts.auto_k, "Pick per-group k by the largest dendrogram height gap");
  cmd->add_option("--merge-target", opts.merge_target, "Merged cluster count");
  cmd->add_option("--min-c", opts.thresholds.construction_min_c,
                  "Construction label: minimum construction fraction");
  cmd->add_option("--min-ps", opts.thresholds.observation_min_ps,
                  "Observation label: minimum parameterization+simulation fraction");
  cmd->add_option("--max-c", opts.thresholds.observation_max_c,
                  "Observation label: maximum construction fraction");
}

void add_learner_options(CLI::App* cmd, Cli& cli, ClusterLearnersOptions& opts) {
  cmd->add_option("--aggregation", cli.aggregation, "Activity feature aggregation: sum | mean");
  cmd->add_option("--components", opts.n_components, "Retained principal components");
  cmd->add_option("--k", opts.k, "K-means cluster count");
  cmd->add_option("--elbow-min", opts.elbow_min, "Smallest k in the elbow sweep");
  cmd->add_option("--elbow-max", opts.elbow_max, "Largest k in the elbow sweep");
  cmd->add_option("--restarts", opts.restarts, "K-means restarts");
}

void add_stats_options(CLI::App* cmd, Cli& cli, StatsOptions& opts) {
  cmd->add_option("--t-mode", cli.t_mode, "t test flavor: pooled | welch");
  cmd->add_flag("--bonferroni", opts.bonferroni, "Report Bonferroni-adjusted pairwise p values");
  cmd->add_flag("--yates", opts.yates, "Yates continuity correction (2x2 tables)");
}

void finalize(Cli& cli) {
  cli.common.svg = !cli.no_svg;
  cli.ingest.format = cli.format == "jsonl" ? LogFormat::JsonLines : LogFormat::Tsv;
  cli.pipeline.format = cli.ingest.format;
  if (cli.format != "tsv" && cli.format != "jsonl")
    throw InputError("--format must be tsv or jsonl");
  cli.segment.sample_sd = cli.sample_sd;
  if (cli.bandwidth != 0.0) cli.segment.bandwidth = cli.bandwidth;
  cli.behaviors.linkage = linkage_from_string(cli.linkage);
  if (cli.aggregation == "mean") cli.learners.aggregation = FeatureAggregation::Mean;
  else if (cli.aggregation != "sum") throw InputError("--aggregation must be sum or mean");
  if (cli.t_mode == "welch") cli.stats.t_mode = TTestMode::Welch;
  else if (cli.t_mode != "pooled") throw InputError("--t-mode must be pooled or welch");
  if (!cli.cohort_config.empty()) cli.synth.cohort_config = cli.cohort_config;
  if (!cli.truth.empty()) cli.pipeline.truth_path = cli.truth;

  cli.pipeline.segment = cli.segment;
  cli.pipeline.behaviors = cli.behaviors;
  cli.pipeline.learners = cli.learners;
  cli.pipeline.stats = cli.stats;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learner-behavior mining for model-building event logs"};
  app.set_version_flag("--version", std::string("seqmine ") + seqmine::kVersion);
  app.set_config("--config", "", "Read options from an INI/TOML config file");
  app.require_subcommand(1);

  Cli cli;

  auto* ingest = app.add_subcommand("ingest", "Parse a log and build activity sequences");
  add_common(ingest, cli);
  ingest->add_option("--log", cli.ingest.log_path, "Event log file")->required();
  ingest->add_option("--format", cli.format, "Log format: tsv | jsonl");

  auto* segment = app.add_subcommand("segment", "Length outlier filter + KDE segmentation");
  add_common(segment, cli);
  add_segment_options(segment, cli, cli.segment);

  auto* behaviors =
      app.add_subcommand("cluster-behaviors", "Cluster sequences into behavior types");
  add_common(behaviors, cli);
  add_behavior_options(behaviors, cli, cli.behaviors);

  auto* learners = app.add_subcommand("cluster-learners", "PCA + K-means++ engagement groups");
  add_common(learners, cli);
  add_learner_options(learners, cli, cli.learners);
  learners->add_option("--seed", cli.learners.seed, "Random seed")->required();

  auto* quality = app.add_subcommand("quality", "Score conceptual model complexity/variety");
  add_common(quality, cli);
  quality->add_option("--models", cli.quality.models_path, "Model JSON file or directory")
      ->required();
  quality->add_flag("--split-variety", cli.quality.split_variety,
                    "Also report component/relationship category counts separately");

  auto* stats = app.add_subcommand("stats", "Chi-square, ANOVA and pairwise t tests");
  add_common(stats, cli);
  add_stats_options(stats, cli, cli.stats);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic log with ground truth");
  add_common(synth, cli);
  synth->add_option("--seed", cli.synth.seed, "Random seed")->required();
  synth->add_option("--cohort", cli.cohort_config, "Cohort spec JSON (defaults built in)");

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage in order");
  add_common(pipeline, cli);
  pipeline->add_option("--log", cli.pipeline.log_path, "Event log file")->required();
  pipeline->add_option("--format", cli.format, "Log format: tsv | jsonl");
  pipeline->add_option("--models", cli.pipeline.models_path, "Model JSON file or directory")
      ->required();
  pipeline->add_option("--truth", cli.truth, "Ground-truth CSV; enables eval.csv");
  pipeline->add_option("--seed", cli.pipeline.seed, "Random seed (required: no silent defaults)")
      ->required();
  add_segment_options(pipeline, cli, cli.segment);
  add_behavior_options(pipeline, cli, cli.behaviors);
  add_learner_options(pipeline, cli, cli.learners);
  add_stats_options(pipeline, cli, cli.stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    finalize(cli);
    if (ingest->parsed()) seqmine::app::run_ingest(cli.common, cli.ingest);
    else if (segment->parsed()) seqmine::app::run_segment(cli.common, cli.segment);
    else if (behaviors->parsed()) seqmine::app::run_cluster_behaviors(cli.common, cli.behaviors);
    else if (learners->parsed()) seqmine::app::run_cluster_learners(cli.common, cli.learners);
    else if (quality->parsed()) seqmine::app::run_quality(cli.common, cli.quality);
    else if (stats->parsed()) seqmine::app::run_stats(cli.common, cli.stats);
    else if (synth->parsed()) seqmine::app::run_synth(cli.common, cli.synth);
    else if (pipeline->parsed()) seqmine::app::run_pipeline(cli.common, cli.pipeline);
  } catch (const seqmine::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const seqmine::InternalError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}
