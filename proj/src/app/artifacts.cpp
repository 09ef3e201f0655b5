#include "app/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>

#include "app/csv.hpp"
#include "seqmine/version.hpp"

namespace seqmine::app {

namespace {

std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }

}  // namespace

std::string sequence_uid(const std::string& learner_id, const std::string& model_id) {
  return learner_id + "/" + model_id;
}

void write_sequences_csv(const std::filesystem::path& path,
                         const std::vector<ActivitySequence>& sequences) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(sequences.size());
  for (const auto& s : sequences)
    rows.push_back({sequence_uid(s.learner_id, s.model_id), s.learner_id, s.model_id,
                    s.is_copied ? "1" : "0", std::to_string(s.length()), s.symbols});
  write_csv(path, {"sequence_id", "learner_id", "model_id", "is_copied", "length", "symbols"},
            rows);
}

std::vector<SequenceRow> read_sequences_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t uid = table.column("sequence_id"), learner = table.column("learner_id");
  const std::size_t model = table.column("model_id"), copied = table.column("is_copied");
  const std::size_t symbols = table.column("symbols");
  std::vector<SequenceRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    SequenceRow row;
    row.uid = r[uid];
    row.sequence = ActivitySequence{r[learner], r[model], r[copied] == "1", r[symbols]};
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_model_records_csv(const std::filesystem::path& path,
                             const std::vector<ModelRecord>& models) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(models.size());
  for (const auto& m : models)
    rows.push_back({m.learner_id, m.model_id, m.is_copied ? "1" : "0",
                    std::to_string(m.first_ts), std::to_string(m.first_pos),
                    std::to_string(m.activity_counts[0]), std::to_string(m.activity_counts[1]),
                    std::to_string(m.activity_counts[2])});
  write_csv(path,
            {"learner_id", "model_id", "is_copied", "first_ts", "first_pos", "n_construction",
             "n_parameterization", "n_simulation"},
            rows);
}

std::vector<ModelRecord> read_model_records_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t learner = table.column("learner_id"), model = table.column("model_id");
  const std::size_t copied = table.column("is_copied"), ts = table.column("first_ts");
  const std::size_t pos = table.column("first_pos");
  const std::size_t nc = table.column("n_construction"), np = table.column("n_parameterization");
  const std::size_t ns = table.column("n_simulation");
  std::vector<ModelRecord> models;
  models.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    ModelRecord m;
    m.learner_id = r[learner];
    m.model_id = r[model];
    m.is_copied = r[copied] == "1";
    m.first_ts = std::stoll(r[ts]);
    m.first_pos = to_size(r[pos]);
    m.activity_counts = {to_size(r[nc]), to_size(r[np]), to_size(r[ns])};
    models.push_back(std::move(m));
  }
  return models;
}

void write_segments_csv(const std::filesystem::path& path, const std::vector<SegmentRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r.uid, std::to_string(r.length), r.group});
  write_csv(path, {"sequence_id", "length", "group"}, out);
}

std::vector<SegmentRow> read_segments_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t uid = table.column("sequence_id"), length = table.column("length");
  const std::size_t group = table.column("group");
  std::vector<SegmentRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) rows.push_back({r[uid], to_size(r[length]), r[group]});
  return rows;
}

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<AssignmentRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r.uid, r.learner_id, r.model_id, r.group, std::to_string(r.cluster),
                   std::to_string(r.merged_cluster), r.behavior});
  write_csv(path,
            {"sequence_id", "learner_id", "model_id", "group", "cluster", "merged_cluster",
             "behavior_type"},
            out);
}

std::vector<AssignmentRow> read_assignments_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t uid = table.column("sequence_id"), learner = table.column("learner_id");
  const std::size_t model = table.column("model_id"), group = table.column("group");
  const std::size_t cluster = table.column("cluster");
  const std::size_t merged = table.column("merged_cluster");
  const std::size_t behavior = table.column("behavior_type");
  std::vector<AssignmentRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows)
    rows.push_back({r[uid], r[learner], r[model], r[group], to_size(r[cluster]),
                    to_size(r[merged]), r[behavior]});
  return rows;
}

void write_projection_csv(const std::filesystem::path& path,
                          const std::vector<ProjectionRow>& rows) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r.learner_id, format_double(r.pc1), format_double(r.pc2),
                   std::to_string(r.cluster), r.group_label, r.excluded ? "1" : "0"});
  write_csv(path, {"learner_id", "pc1", "pc2", "cluster", "group", "excluded"}, out);
}

std::vector<ProjectionRow> read_projection_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t learner = table.column("learner_id"), pc1 = table.column("pc1");
  const std::size_t pc2 = table.column("pc2"), cluster = table.column("cluster");
  const std::size_t group = table.column("group"), excluded = table.column("excluded");
  std::vector<ProjectionRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows)
    rows.push_back({r[learner], std::stod(r[pc1]), std::stod(r[pc2]), to_size(r[cluster]),
                    r[group], r[excluded] == "1"});
  return rows;
}

void write_quality_csv(const std::filesystem::path& path, const std::vector<QualityRow>& rows,
                       bool split_variety) {
  std::vector<std::string> header{"model_id", "behavior_type", "complexity", "variety"};
  if (split_variety) {
    header.push_back("component_categories");
    header.push_back("relationship_categories");
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<std::string> row{r.model_id, r.behavior, std::to_string(r.complexity),
                                 std::to_string(r.variety)};
    if (split_variety) {
      row.push_back(std::to_string(r.component_categories.value_or(0)));
      row.push_back(std::to_string(r.relationship_categories.value_or(0)));
    }
    out.push_back(std::move(row));
  }
  write_csv(path, header, out);
}

std::vector<QualityRow> read_quality_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t model = table.column("model_id"), behavior = table.column("behavior_type");
  const std::size_t complexity = table.column("complexity"), variety = table.column("variety");
  std::vector<QualityRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    QualityRow row;
    row.model_id = r[model];
    row.behavior = r[behavior];
    row.complexity = to_size(r[complexity]);
    row.variety = to_size(r[variety]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(truth.models.size() + truth.learners.size());
  for (const auto& m : truth.models)
    rows.push_back({m.model_id, "model", std::string(to_string(m.behavior))});
  for (const auto& l : truth.learners) rows.push_back({l.learner_id, "learner", l.engagement});
  write_csv(path, {"entity_id", "kind", "label"}, rows);
}

GroundTruth read_truth_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t entity = table.column("entity_id"), kind = table.column("kind");
  const std::size_t label = table.column("label");
  GroundTruth truth;
  for (const auto& r : table.rows) {
    if (r[kind] == "model") {
      BehaviorType type = BehaviorType::Observation;
      if (r[label] == "construction") type = BehaviorType::Construction;
      else if (r[label] == "full_cycle") type = BehaviorType::FullCycle;
      truth.models.push_back({r[entity], "", type});
    } else if (r[kind] == "learner") {
      truth.learners.push_back({r[entity], r[label]});
    } else {
      throw InputError("truth.csv: unknown entity kind '" + r[kind] + "'");
    }
  }
  return truth;
}

void write_event_log_tsv(const std::filesystem::path& path,
                         const std::vector<RawEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "# timestamp_ms\tlearner_id\tmodel_id\taction_kind\tcopied_from\n";
  for (const auto& ev : events) {
    out << ev.timestamp_ms << '\t' << ev.learner_id << '\t' << ev.model_id << '\t'
        << to_token(ev.kind) << '\t' << (ev.copied_from ? *ev.copied_from : "") << '\n';
  }
}

void write_models_json(const std::filesystem::path& path,
                       const std::vector<ConceptualModel>& models) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& m : models) doc.push_back(to_json(m));
  write_json(path, doc);
}

std::vector<ConceptualModel> load_models(const std::filesystem::path& path) {
  std::vector<ConceptualModel> models;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> entries;
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.path().extension() == ".json") entries.push_back(entry.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& p : entries)
      for (auto& m : parse_models(read_json(p))) models.push_back(std::move(m));
  } else {
    models = parse_models(read_json(path));
  }
  return models;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_stage_meta(const std::filesystem::path& out_dir, const std::string& stage,
                      const nlohmann::json& config, std::optional<double> elapsed_ms) {
  nlohmann::json meta;
  meta["stage"] = stage;
  meta["version"] = kVersion;
  meta["config"] = config;
  if (elapsed_ms) meta["elapsed_ms"] = *elapsed_ms;
  write_json(out_dir / ("meta_" + stage + ".json"), meta);
}

}  // namespace seqmine::app
