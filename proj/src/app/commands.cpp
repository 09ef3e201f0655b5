#include "app/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "app/artifacts.hpp"
#include "app/csv.hpp"
#include "app/figures.hpp"
#include "seqmine/segmentation.hpp"
#include "seqmine/synth.hpp"

namespace seqmine::app {

namespace {

class StageTimer {
 public:
  explicit StageTimer(bool enabled) : enabled_(enabled), start_(clock::now()) {}

  std::optional<double> elapsed_ms() const {
    if (!enabled_) return std::nullopt;
    const auto delta = clock::now() - start_;
    return std::chrono::duration<double, std::milli>(delta).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  bool enabled_;
  clock::time_point start_;
};

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string());
}

nlohmann::json profile_json(const ActivityProfile& p) {
  return {{"frac_c", p.frac_c},
          {"frac_p", p.frac_p},
          {"frac_s", p.frac_s},
          {"mean_length", p.mean_length},
          {"members", p.members}};
}

nlohmann::json test_json(const TestResult& t) {
  nlohmann::json doc{{"kind", t.kind},
                     {"statistic", t.statistic},
                     {"df1", t.df1},
                     {"p_value", t.p_value}};
  if (t.kind == "anova") doc["df2"] = t.df2;
  return doc;
}

// Largest gap between consecutive merge heights decides the cut level.
std::size_t auto_cut_k(const Dendrogram& dendrogram) {
  const auto& merges = dendrogram.merges;
  if (merges.size() < 2) return std::min<std::size_t>(2, dendrogram.n_leaves);
  std::size_t best_t = merges.size() - 1;
  double best_gap = -1.0;
  for (std::size_t t = 0; t + 1 < merges.size(); ++t) {
    const double gap = merges[t + 1].height - merges[t].height;
    if (gap > best_gap) {
      best_gap = gap;
      best_t = t;
    }
  }
  return dendrogram.n_leaves - best_t - 1;
}

nlohmann::json dendrogram_json(const Dendrogram& d) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : d.merges)
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height},
                      {"size", m.size}});
  return {{"n_leaves", d.n_leaves}, {"linkage", std::string(to_string(d.linkage))},
          {"merges", merges}};
}

}  // namespace

void run_ingest(const CommonOptions& common, const IngestOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  std::ifstream in(opts.log_path, std::ios::binary);
  if (!in) throw InputError("cannot read log " + opts.log_path.string());
  const auto events = parse_event_log(in, opts.format);
  const IngestResult result = build_sequences(events);

  write_sequences_csv(common.out_dir / files::kSequences, result.sequences);
  write_model_records_csv(common.out_dir / files::kModelRecords, result.models);

  std::set<std::string> learners;
  for (const auto& m : result.models) learners.insert(m.learner_id);

  nlohmann::json report;
  report["total_events"] = result.total_events;
  report["classifiable_events"] = result.classifiable_events;
  report["learners"] = learners.size();
  report["model_pairs_total"] = result.models.size();
  report["model_pairs_with_activity"] = result.sequences.size();
  report["model_pairs_zero_activity"] = result.zero_activity_models;
  if (!result.sequences.empty()) {
    const SequenceSummary s = sequence_stats(result.sequences);
    report["sequence_lengths"] = {{"count", s.count},
                                  {"mean", s.mean_length},
                                  {"median", s.median_length},
                                  {"min", s.min_length},
                                  {"max", s.max_length}};
  }
  write_json(common.out_dir / files::kIngestReport, report);

  write_stage_meta(common.out_dir, "ingest",
                   {{"log", opts.log_path.string()},
                    {"format", opts.format == LogFormat::Tsv ? "tsv" : "jsonl"}},
                   timer.elapsed_ms());
}

void run_segment(const CommonOptions& common, const SegmentOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);
  if (opts.n_cuts != 2)
    throw InputError("segment stage splits into short/medium/long and needs exactly 2 cuts");

  const auto sequences = read_sequences_csv(common.out_dir / files::kSequences);
  std::vector<std::size_t> lengths;
  lengths.reserve(sequences.size());
  for (const auto& s : sequences) lengths.push_back(s.sequence.length());

  const OutlierFilter filter = filter_outliers(lengths, opts.outlier_k, opts.sample_sd);

  std::vector<std::size_t> retained_lengths;
  retained_lengths.reserve(filter.retained.size());
  for (std::size_t idx : filter.retained) retained_lengths.push_back(lengths[idx]);
  if (retained_lengths.size() < 2)
    throw TooFewSequences("segment: outlier filter left fewer than 2 sequences");

  const DensityEstimate density = kde(retained_lengths, opts.bandwidth);
  const CutPoints cuts = find_cutpoints(density, opts.n_cuts);
  const LengthSegments segments = segment(retained_lengths, cuts.cuts[0], cuts.cuts[1]);

  std::vector<SegmentRow> rows(sequences.size());
  for (std::size_t i = 0; i < sequences.size(); ++i)
    rows[i] = {sequences[i].uid, lengths[i], "removed"};
  for (std::size_t r = 0; r < filter.retained.size(); ++r)
    rows[filter.retained[r]].group = std::string(to_string(segments.assignment[r]));
  write_segments_csv(common.out_dir / files::kSegments, rows);

  {
    std::vector<std::vector<std::string>> density_rows;
    density_rows.reserve(density.grid.size());
    for (std::size_t g = 0; g < density.grid.size(); ++g)
      density_rows.push_back({format_double(density.grid[g]), format_double(density.density[g])});
    write_csv(common.out_dir / files::kDensity, {"grid", "density"}, density_rows);
  }

  nlohmann::json report;
  report["outlier_bounds"] = {{"mean", filter.bounds.mean},
                              {"sd", filter.bounds.sd},
                              {"k", filter.bounds.k},
                              {"lower", filter.bounds.lower},
                              {"upper", filter.bounds.upper},
                              {"sd_mode", opts.sample_sd ? "sample" : "population"}};
  report["removed"] = filter.removed.size();
  report["retained"] = filter.retained.size();
  report["bandwidth"] = density.bandwidth;
  report["bandwidth_mode"] = opts.bandwidth ? "fixed" : "silverman";
  report["cut_points"] = cuts.cuts;
  report["cut_fallback"] = cuts.fallback;
  report["group_counts"] = {{"short", segments.short_count},
                            {"medium", segments.medium_count},
                            {"long", segments.long_count}};
  write_json(common.out_dir / files::kSegmentReport, report);

  nlohmann::json config{{"outlier_k", opts.outlier_k},
                        {"sample_sd", opts.sample_sd},
                        {"n_cuts", opts.n_cuts}};
  if (opts.bandwidth) config["bandwidth"] = *opts.bandwidth;
  write_stage_meta(common.out_dir, "segment", config, timer.elapsed_ms());
}

void run_cluster_behaviors(const CommonOptions& common, const ClusterBehaviorsOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);
  if (opts.group_k.size() != 3)
    throw InputError("cluster-behaviors: need one cluster count per length group");

  const auto sequences = read_sequences_csv(common.out_dir / files::kSequences);
  const auto segments = read_segments_csv(common.out_dir / files::kSegments);

  std::map<std::string, std::size_t> seq_index;
  for (std::size_t i = 0; i < sequences.size(); ++i) seq_index[sequences[i].uid] = i;

  const std::array<std::string, 3> group_names{"short", "medium", "long"};
  std::array<std::vector<std::size_t>, 3> group_members;  // global sequence indices
  for (const auto& row : segments) {
    const auto it = seq_index.find(row.uid);
    if (it == seq_index.end())
      throw InputError("segments.csv references unknown sequence " + row.uid);
    for (std::size_t g = 0; g < 3; ++g)
      if (row.group == group_names[g]) group_members[g].push_back(it->second);
  }

  std::vector<SubCluster> subclusters;
  std::vector<std::string> subcluster_group;      // length-group name per subcluster
  std::vector<std::size_t> subcluster_local_id;   // cluster index within its group
  std::map<std::string, std::pair<std::string, std::size_t>> per_sequence;  // uid -> (group, cluster)
  nlohmann::json group_summary = nlohmann::json::array();

  for (std::size_t g = 0; g < 3; ++g) {
    const auto& members = group_members[g];
    if (members.empty()) {
      group_summary.push_back({{"group", group_names[g]}, {"sequences", 0}, {"clusters", 0}});
      continue;
    }

    std::vector<std::string> symbols;
    symbols.reserve(members.size());
    for (std::size_t idx : members) symbols.push_back(sequences[idx].sequence.symbols);

    std::vector<std::size_t> labels(members.size(), 0);
    std::size_t k_used = 1;
    if (members.size() >= 2) {
      const DistanceMatrix dm = distance_matrix(symbols, common.threads);
      const Dendrogram dendro = agglomerate(dm, opts.linkage);
      k_used = opts.auto_k ? auto_cut_k(dendro)
                           : std::min<std::size_t>(opts.group_k[g], members.size());
      labels = cut(dendro, k_used);

      write_json(common.out_dir / ("dendrogram_" + group_names[g] + ".json"),
                 dendrogram_json(dendro));
      if (common.svg)
        render_dendrogram_svg(common.out_dir / ("dendrogram_" + group_names[g] + ".svg"), dendro,
                              group_names[g] + " group dendrogram");
    }

    for (std::size_t cluster = 0; cluster < k_used; ++cluster) {
      SubCluster sc;
      std::vector<std::string> cluster_symbols;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (labels[i] != cluster) continue;
        sc.member_ids.push_back(members[i]);
        cluster_symbols.push_back(symbols[i]);
        per_sequence[sequences[members[i]].uid] = {group_names[g], cluster};
      }
      sc.profile = profile(cluster_symbols);
      subclusters.push_back(std::move(sc));
      subcluster_group.push_back(group_names[g]);
      subcluster_local_id.push_back(cluster);
    }
    group_summary.push_back(
        {{"group", group_names[g]}, {"sequences", members.size()}, {"clusters", k_used}});
  }

  if (subclusters.empty()) throw TooFewClusters("cluster-behaviors: no clustered sequences");
  const std::size_t target = std::min(opts.merge_target, subclusters.size());
  const auto merged = merge_groups(subclusters, target);

  std::map<std::size_t, std::pair<std::size_t, BehaviorType>> merged_of_sequence;
  nlohmann::json merged_summary = nlohmann::json::array();
  for (std::size_t mc = 0; mc < merged.size(); ++mc) {
    const BehaviorType type = label_behavior(merged[mc].profile, opts.thresholds);
    for (std::size_t seq_id : merged[mc].member_ids) merged_of_sequence[seq_id] = {mc, type};
    nlohmann::json sources = nlohmann::json::array();
    for (std::size_t sc : merged[mc].source_clusters)
      sources.push_back({{"group", subcluster_group[sc]}, {"cluster", subcluster_local_id[sc]}});
    merged_summary.push_back({{"merged_cluster", mc},
                              {"behavior_type", std::string(to_string(type))},
                              {"profile", profile_json(merged[mc].profile)},
                              {"sources", sources}});
  }

  std::vector<AssignmentRow> rows;
  rows.reserve(merged_of_sequence.size());
  for (const auto& [seq_id, info] : merged_of_sequence) {
    const SequenceRow& s = sequences[seq_id];
    const auto& [group, cluster] = per_sequence[s.uid];
    rows.push_back({s.uid, s.sequence.learner_id, s.sequence.model_id, group, cluster,
                    info.first, std::string(to_string(info.second))});
  }
  std::sort(rows.begin(), rows.end(),
            [](const AssignmentRow& a, const AssignmentRow& b) { return a.uid < b.uid; });
  write_assignments_csv(common.out_dir / files::kAssignments, rows);

  nlohmann::json report;
  report["linkage"] = std::string(to_string(opts.linkage));
  report["cluster_counts"] = opts.auto_k ? nlohmann::json("auto") : nlohmann::json(opts.group_k);
  report["merge_target"] = opts.merge_target;
  report["label_thresholds"] = {{"construction_min_c", opts.thresholds.construction_min_c},
                                {"observation_min_ps", opts.thresholds.observation_min_ps},
                                {"observation_max_c", opts.thresholds.observation_max_c}};
  report["groups"] = group_summary;
  report["merged_clusters"] = merged_summary;
  write_json(common.out_dir / files::kBehaviorReport, report);

  write_stage_meta(common.out_dir, "cluster_behaviors",
                   {{"linkage", std::string(to_string(opts.linkage))},
                    {"group_k", opts.group_k},
                    {"auto_k", opts.auto_k},
                    {"merge_target", opts.merge_target}},
                   timer.elapsed_ms());
}

void run_cluster_learners(const CommonOptions& common, const ClusterLearnersOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  const auto models = read_model_records_csv(common.out_dir / files::kModelRecords);
  if (models.empty()) throw NoModels("cluster-learners: models.csv is empty");

  std::vector<std::string> learner_ids;
  const Matrix features = learner_features(models, opts.aggregation, learner_ids);

  const Standardized scaled = standardize(features);
  const std::size_t n_components = std::min(opts.n_components, features.cols);
  const PcaModel model = pca(scaled, n_components);
  const Matrix projected = project(model, scaled.data);

  const std::size_t n = projected.rows;
  const std::size_t k = std::min(opts.k, n);
  const std::size_t elbow_hi = std::min(opts.elbow_max, n);
  const std::size_t elbow_lo = std::min(opts.elbow_min, elbow_hi);
  const ElbowReport elbow_report = elbow(projected, elbow_lo, elbow_hi, opts.seed, opts.restarts);
  const KMeansResult clusters = kmeans_pp(projected, k, opts.seed, opts.restarts);
  const auto groups = exclude_singletons(clusters, projected);

  const std::array<std::string, 5> feature_names{"original_models", "copied_models",
                                                 "construction", "parameterization",
                                                 "simulation"};

  {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> row{learner_ids[i]};
      for (std::size_t j = 0; j < features.cols; ++j)
        row.push_back(format_double(features.at(i, j)));
      rows.push_back(std::move(row));
    }
    write_csv(common.out_dir / files::kFeatures,
              {"learner_id", "v1_original_models", "v2_copied_models", "v3_construction",
               "v4_parameterization", "v5_simulation"},
              rows);
  }

  std::vector<ProjectionRow> projection_rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    projection_rows[i].learner_id = learner_ids[i];
    projection_rows[i].pc1 = projected.at(i, 0);
    projection_rows[i].pc2 = n_components > 1 ? projected.at(i, 1) : 0.0;
    projection_rows[i].cluster = clusters.assignment[i];
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t row : groups[g].member_rows) {
      projection_rows[row].group_label = groups[g].label;
      projection_rows[row].excluded = groups[g].excluded;
    }
  }
  write_projection_csv(common.out_dir / files::kProjection, projection_rows);

  {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t c = 0; c < model.components.rows; ++c)
      for (std::size_t j = 0; j < model.components.cols; ++j)
        rows.push_back({"PC" + std::to_string(c + 1), feature_names[j],
                        format_double(model.components.at(c, j))});
    write_csv(common.out_dir / files::kLoadings, {"component", "feature", "value"}, rows);
  }

  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : elbow_report.points)
      rows.push_back({std::to_string(p.k), format_double(p.sse)});
    write_csv(common.out_dir / files::kElbow, {"k", "sse"}, rows);
  }

  nlohmann::json report;
  report["learners"] = n;
  report["aggregation"] = opts.aggregation == FeatureAggregation::Sum ? "sum" : "mean";
  report["explained_variance_ratios"] = model.explained_ratios;
  report["eigenvalues"] = model.eigenvalues;
  {
    nlohmann::json importance = nlohmann::json::array();
    const auto imp = feature_importance(model);
    for (std::size_t c = 0; c < imp.size(); ++c) {
      std::size_t arg = 0;
      for (std::size_t j = 1; j < imp[c].size(); ++j)
        if (imp[c][j] > imp[c][arg]) arg = j;
      importance.push_back({{"component", "PC" + std::to_string(c + 1)},
                            {"magnitudes", imp[c]},
                            {"top_feature", feature_names[arg]}});
    }
    report["feature_importance"] = importance;
  }
  {
    nlohmann::json constant_cols = nlohmann::json::array();
    for (std::size_t j = 0; j < scaled.constant_columns.size(); ++j)
      if (scaled.constant_columns[j]) constant_cols.push_back(feature_names[j]);
    report["constant_features"] = constant_cols;
  }
  report["k"] = k;
  report["kmeans_sse"] = clusters.sse;
  report["kmeans_iterations"] = clusters.iterations;
  report["kmeans_best_restart"] = clusters.best_restart;
  report["seed"] = opts.seed;
  report["elbow_largest_drop_k"] = elbow_report.largest_drop_k;
  {
    nlohmann::json group_docs = nlohmann::json::array();
    std::size_t excluded = 0;
    for (const auto& g : groups) {
      if (g.excluded) ++excluded;
      group_docs.push_back({{"label", g.label.empty() ? "(excluded)" : g.label},
                            {"members", g.member_rows.size()},
                            {"mean_pc1", g.pc1_centroid},
                            {"mean_pc2", g.pc2_centroid},
                            {"excluded", g.excluded}});
    }
    report["groups"] = group_docs;
    report["excluded_singletons"] = excluded;
    if (excluded == groups.size() && !groups.empty())
      report["warning"] = "every cluster is a singleton; no engagement groups remain";
  }
  write_json(common.out_dir / files::kLearnerReport, report);

  if (common.svg) {
    std::vector<ScatterPoint> points;
    std::vector<std::string> labels;
    std::map<std::string, std::size_t> series_of;
    for (const auto& g : groups) {
      const std::string name = g.label.empty() ? "excluded" : ("group " + g.label);
      if (!series_of.count(name)) {
        series_of[name] = labels.size();
        labels.push_back(name);
      }
    }
    for (const auto& g : groups) {
      const std::string name = g.label.empty() ? "excluded" : ("group " + g.label);
      for (std::size_t row : g.member_rows)
        points.push_back({projection_rows[row].pc1, projection_rows[row].pc2, series_of[name]});
    }
    render_scatter_svg(common.out_dir / "scatter.svg", points, labels,
                       "learners in PC1/PC2 space", "PC1", "PC2");

    std::vector<std::pair<double, double>> k_sse;
    for (const auto& p : elbow_report.points)
      k_sse.emplace_back(static_cast<double>(p.k), p.sse);
    render_elbow_svg(common.out_dir / "elbow.svg", k_sse, "SSE by cluster count");
  }

  write_stage_meta(common.out_dir, "cluster_learners",
                   {{"aggregation", opts.aggregation == FeatureAggregation::Sum ? "sum" : "mean"},
                    {"n_components", n_components},
                    {"k", opts.k},
                    {"elbow_min", opts.elbow_min},
                    {"elbow_max", opts.elbow_max},
                    {"restarts", opts.restarts},
                    {"seed", opts.seed}},
                   timer.elapsed_ms());
}

void run_quality(const CommonOptions& common, const QualityOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  const auto models = load_models(opts.models_path);

  std::map<std::string, std::string> behavior_of_model;
  const auto assignments_path = common.out_dir / files::kAssignments;
  if (std::filesystem::exists(assignments_path)) {
    for (const auto& row : read_assignments_csv(assignments_path))
      behavior_of_model.emplace(row.model_id, row.behavior);
  }

  std::vector<QualityRow> rows;
  rows.reserve(models.size());
  for (const auto& m : models) {
    QualityRow row;
    row.model_id = m.model_id;
    const auto it = behavior_of_model.find(m.model_id);
    if (it != behavior_of_model.end()) row.behavior = it->second;
    row.complexity = complexity(m);
    row.variety = variety(m);
    if (opts.split_variety) {
      const VarietySplit split = variety_split(m);
      row.component_categories = split.component_categories;
      row.relationship_categories = split.relationship_categories;
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const QualityRow& a, const QualityRow& b) { return a.model_id < b.model_id; });
  write_quality_csv(common.out_dir / files::kQuality, rows, opts.split_variety);

  write_stage_meta(common.out_dir, "quality",
                   {{"models", opts.models_path.string()},
                    {"split_variety", opts.split_variety},
                    {"models_scored", rows.size()}},
                   timer.elapsed_ms());
}

void run_stats(const CommonOptions& common, const StatsOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  const auto assignments = read_assignments_csv(common.out_dir / files::kAssignments);
  const auto projection = read_projection_csv(common.out_dir / files::kProjection);
  const auto quality = read_quality_csv(common.out_dir / files::kQuality);

  nlohmann::json report;

  // Behavior x engagement contingency table over models. Only learners in a
  // kept (non-excluded) group count.
  {
    std::map<std::string, std::string> group_of_learner;
    for (const auto& row : projection)
      if (!row.excluded && !row.group_label.empty()) group_of_learner[row.learner_id] = row.group_label;

    const std::array<std::string, 3> behaviors{"observation", "construction", "full_cycle"};
    std::map<std::string, std::array<std::uint64_t, 3>> table_rows;
    for (const auto& a : assignments) {
      const auto it = group_of_learner.find(a.learner_id);
      if (it == group_of_learner.end()) continue;
      for (std::size_t b = 0; b < behaviors.size(); ++b)
        if (a.behavior == behaviors[b]) ++table_rows[it->second][b];
    }

    std::vector<std::size_t> used_cols;
    for (std::size_t b = 0; b < behaviors.size(); ++b) {
      std::uint64_t total = 0;
      for (const auto& [label, counts] : table_rows) total += counts[b];
      if (total > 0) used_cols.push_back(b);
    }

    nlohmann::json table_doc = nlohmann::json::object();
    ContingencyTable table;
    for (const auto& [label, counts] : table_rows) {
      std::vector<std::uint64_t> row;
      nlohmann::json row_doc = nlohmann::json::object();
      for (std::size_t b : used_cols) {
        row.push_back(counts[b]);
        row_doc[behaviors[b]] = counts[b];
      }
      table.push_back(std::move(row));
      table_doc[label] = std::move(row_doc);
    }
    report["behavior_by_group"] = {{"table", table_doc}};

    if (table.size() >= 2 && used_cols.size() >= 2) {
      const TestResult chi = chi_square_independence(table, opts.yates);
      report["behavior_by_group"]["chi_square"] = test_json(chi);
    } else {
      report["behavior_by_group"]["chi_square"] = nullptr;
      report["behavior_by_group"]["note"] =
          "table is degenerate (fewer than 2 groups or 2 behavior types)";
    }
  }

  // Quality by behavior type: ANOVA plus pairwise t tests.
  const std::array<std::string, 3> behavior_names{"observation", "construction", "full_cycle"};
  auto metric_block = [&](const char* metric,
                          auto accessor) {
    std::vector<std::vector<double>> samples;
    std::vector<std::string> present;
    nlohmann::json by_type = nlohmann::json::object();
    for (const auto& name : behavior_names) {
      std::vector<double> values;
      for (const auto& q : quality)
        if (q.behavior == name) values.push_back(static_cast<double>(accessor(q)));
      if (values.empty()) continue;
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      by_type[name] = {{"n", values.size()}, {"mean", mean}};
      samples.push_back(std::move(values));
      present.push_back(name);
    }

    nlohmann::json block;
    block["by_type"] = by_type;
    if (samples.size() >= 2) {
      try {
        block["anova"] = test_json(one_way_anova(samples));
      } catch (const InputError& e) {
        block["anova"] = nullptr;
        block["anova_note"] = e.what();
      }
    }
    nlohmann::json pairwise = nlohmann::json::array();
    const std::size_t n_pairs = samples.size() * (samples.size() - 1) / 2;
    for (std::size_t i = 0; i < samples.size(); ++i)
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        nlohmann::json entry{{"a", present[i]}, {"b", present[j]}};
        try {
          const TestResult t = t_test(samples[i], samples[j], opts.t_mode);
          entry["test"] = test_json(t);
          if (opts.bonferroni)
            entry["p_adjusted"] = std::min(1.0, t.p_value * static_cast<double>(n_pairs));
        } catch (const InputError& e) {
          entry["test"] = nullptr;
          entry["note"] = e.what();
        }
        pairwise.push_back(std::move(entry));
      }
    block["pairwise_t"] = pairwise;
    report[metric] = std::move(block);

    return samples.size();
  };

  metric_block("complexity", [](const QualityRow& q) { return q.complexity; });
  metric_block("variety", [](const QualityRow& q) { return q.variety; });

  write_json(common.out_dir / files::kStatsReport, report);

  if (common.svg) {
    auto boxes_for = [&](auto accessor) {
      std::vector<BoxStats> boxes;
      for (const auto& name : behavior_names) {
        std::vector<double> values;
        for (const auto& q : quality)
          if (q.behavior == name) values.push_back(static_cast<double>(accessor(q)));
        if (!values.empty()) boxes.push_back(box_stats(name, std::move(values)));
      }
      return boxes;
    };
    render_boxplot_svg(common.out_dir / "complexity_by_type.svg",
                       boxes_for([](const QualityRow& q) { return q.complexity; }),
                       "model complexity by behavior type", "complexity");
    render_boxplot_svg(common.out_dir / "variety_by_type.svg",
                       boxes_for([](const QualityRow& q) { return q.variety; }),
                       "model variety by behavior type", "variety");
  }

  write_stage_meta(common.out_dir, "stats",
                   {{"t_mode", opts.t_mode == TTestMode::Pooled ? "pooled" : "welch"},
                    {"bonferroni", opts.bonferroni},
                    {"yates", opts.yates}},
                   timer.elapsed_ms());
}

namespace {

CohortSpec cohort_from_json(const nlohmann::json& doc, std::uint64_t seed) {
  CohortSpec cohort;
  cohort.seed = seed;
  if (!doc.contains("groups") || !doc["groups"].is_array())
    throw InputError("cohort config: missing 'groups' array");
  for (const auto& g : doc["groups"]) {
    EngagementArchetype group;
    group.label = g.at("label").get<std::string>();
    group.learners = g.at("learners").get<std::size_t>();
    group.models_per_learner = g.at("models_per_learner").get<double>();
    group.action_scale = g.at("action_scale").get<double>();
    const auto& mix = g.at("mixture");
    if (!mix.is_array() || mix.size() != 3)
      throw InputError("cohort config: 'mixture' must have 3 entries");
    for (std::size_t i = 0; i < 3; ++i) group.behavior_mixture[i] = mix[i].get<double>();
    cohort.groups.push_back(std::move(group));
  }
  return cohort;
}

// Optional per-archetype overrides keyed by name; unspecified fields keep the
// built-in defaults.
void apply_archetype_overrides(const nlohmann::json& entries,
                               std::array<ArchetypeSpec, 3>& archetypes) {
  if (!entries.is_array()) throw InputError("cohort config: 'archetypes' must be an array");
  for (const auto& entry : entries) {
    const std::string name = entry.at("name").get<std::string>();
    ArchetypeSpec* target = nullptr;
    for (auto& a : archetypes)
      if (to_string(a.name) == name) target = &a;
    if (!target) throw InputError("cohort config: unknown archetype '" + name + "'");

    if (entry.contains("initial")) {
      const auto& init = entry["initial"];
      if (!init.is_array() || init.size() != 3)
        throw InputError("cohort config: 'initial' must have 3 entries");
      for (std::size_t i = 0; i < 3; ++i) target->initial[i] = init[i].get<double>();
    }
    if (entry.contains("transition")) {
      const auto& rows = entry["transition"];
      if (!rows.is_array() || rows.size() != 3)
        throw InputError("cohort config: 'transition' must be a 3x3 matrix");
      for (std::size_t i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3)
          throw InputError("cohort config: 'transition' must be a 3x3 matrix");
        for (std::size_t j = 0; j < 3; ++j) target->transition[i][j] = rows[i][j].get<double>();
      }
    }
    if (entry.contains("length_dist")) {
      const std::string dist = entry["length_dist"].get<std::string>();
      if (dist == "geometric") target->length_dist = LengthDist::Geometric;
      else if (dist == "negative_binomial") target->length_dist = LengthDist::NegativeBinomial;
      else throw InputError("cohort config: length_dist must be geometric or negative_binomial");
    }
    if (entry.contains("mean_length")) target->mean_length = entry["mean_length"].get<double>();
    if (entry.contains("negbin_r")) target->negbin_r = entry["negbin_r"].get<std::uint32_t>();
    if (entry.contains("copy_probability"))
      target->copy_probability = entry["copy_probability"].get<double>();
    if (entry.contains("copied_base_mean"))
      target->copied_base_mean = entry["copied_base_mean"].get<double>();
    if (entry.contains("component_category_pool"))
      target->component_category_pool = entry["component_category_pool"].get<std::uint32_t>();
    if (entry.contains("relationship_category_pool"))
      target->relationship_category_pool =
          entry["relationship_category_pool"].get<std::uint32_t>();
  }
}

}  // namespace

void run_synth(const CommonOptions& common, const SynthOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  CohortSpec cohort = default_cohort(opts.seed);
  std::array<ArchetypeSpec, 3> archetypes = default_archetypes();
  if (opts.cohort_config) {
    const nlohmann::json doc = read_json(*opts.cohort_config);
    if (doc.contains("groups")) cohort = cohort_from_json(doc, opts.seed);
    if (doc.contains("archetypes")) apply_archetype_overrides(doc["archetypes"], archetypes);
  }

  const SynthOutput output = generate(cohort, archetypes);
  write_event_log_tsv(common.out_dir / files::kLog, output.events);
  write_models_json(common.out_dir / files::kModels, output.models);
  write_truth_csv(common.out_dir / files::kTruth, output.truth);

  nlohmann::json config{{"seed", opts.seed},
                        {"events", output.events.size()},
                        {"models", output.models.size()},
                        {"learners", output.truth.learners.size()}};
  if (opts.cohort_config) config["cohort_config"] = opts.cohort_config->string();
  write_stage_meta(common.out_dir, "synth", config, timer.elapsed_ms());
}

namespace {

void run_eval(const CommonOptions& common, const std::filesystem::path& truth_path) {
  const GroundTruth truth = read_truth_csv(truth_path);
  const auto assignments = read_assignments_csv(common.out_dir / files::kAssignments);
  const auto projection = read_projection_csv(common.out_dir / files::kProjection);

  std::vector<std::vector<std::string>> rows;

  {
    std::map<std::string, std::string> truth_of_model;
    for (const auto& m : truth.models)
      truth_of_model[m.model_id] = std::string(to_string(m.behavior));
    std::vector<std::string> truth_labels, predicted_labels;
    for (const auto& a : assignments) {
      const auto it = truth_of_model.find(a.model_id);
      if (it == truth_of_model.end()) continue;
      truth_labels.push_back(it->second);
      predicted_labels.push_back(a.behavior);
    }
    if (!truth_labels.empty()) {
      const double ari =
          adjusted_rand_index(encode_labels(truth_labels), encode_labels(predicted_labels));
      rows.push_back({"ari_behavior", format_double(ari)});
      rows.push_back({"ari_behavior_n", std::to_string(truth_labels.size())});
    }
  }

  {
    std::map<std::string, std::string> truth_of_learner;
    for (const auto& l : truth.learners) truth_of_learner[l.learner_id] = l.engagement;
    std::vector<std::string> truth_labels, predicted_labels;
    for (const auto& p : projection) {
      if (p.excluded || p.group_label.empty()) continue;
      const auto it = truth_of_learner.find(p.learner_id);
      if (it == truth_of_learner.end()) continue;
      truth_labels.push_back(it->second);
      predicted_labels.push_back(p.group_label);
    }
    if (!truth_labels.empty()) {
      const double ari =
          adjusted_rand_index(encode_labels(truth_labels), encode_labels(predicted_labels));
      rows.push_back({"ari_engagement", format_double(ari)});
      rows.push_back({"ari_engagement_n", std::to_string(truth_labels.size())});
    }
  }

  write_csv(common.out_dir / files::kEval, {"metric", "value"}, rows);
}

}  // namespace

void run_pipeline(const CommonOptions& common, const PipelineOptions& opts) {
  StageTimer timer(common.timings);
  ensure_out_dir(common.out_dir);

  run_ingest(common, IngestOptions{opts.log_path, opts.format});
  run_segment(common, opts.segment);
  run_cluster_behaviors(common, opts.behaviors);

  ClusterLearnersOptions learners = opts.learners;
  learners.seed = opts.seed;
  run_cluster_learners(common, learners);

  run_quality(common, QualityOptions{opts.models_path, false});
  run_stats(common, opts.stats);
  if (opts.truth_path) run_eval(common, *opts.truth_path);

  write_stage_meta(common.out_dir, "pipeline",
                   {{"log", opts.log_path.string()},
                    {"models", opts.models_path.string()},
                    {"seed", opts.seed},
                    {"truth", opts.truth_path ? opts.truth_path->string() : ""}},
                   timer.elapsed_ms());
}

}  // namespace seqmine::app
