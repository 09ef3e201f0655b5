#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqmine/log_ingest.hpp"
#include "seqmine/model_quality.hpp"
#include "seqmine/segmentation.hpp"
#include "seqmine/synth.hpp"

namespace seqmine::app {

// Canonical artifact names inside an output directory. Stages communicate
// only through these files.
namespace files {
inline constexpr const char* kLog = "log.tsv";
inline constexpr const char* kModels = "models.json";
inline constexpr const char* kTruth = "truth.csv";
inline constexpr const char* kSequences = "sequences.csv";
inline constexpr const char* kModelRecords = "models.csv";
inline constexpr const char* kIngestReport = "ingest_report.json";
inline constexpr const char* kSegments = "segments.csv";
inline constexpr const char* kSegmentReport = "segment_report.json";
inline constexpr const char* kDensity = "density.csv";
inline constexpr const char* kAssignments = "assignments.csv";
inline constexpr const char* kBehaviorReport = "behavior_report.json";
inline constexpr const char* kFeatures = "features.csv";
inline constexpr const char* kProjection = "projection.csv";
inline constexpr const char* kLoadings = "loadings.csv";
inline constexpr const char* kElbow = "elbow.csv";
inline constexpr const char* kLearnerReport = "learner_report.json";
inline constexpr const char* kQuality = "quality.csv";
inline constexpr const char* kStatsReport = "stats_report.json";
inline constexpr const char* kEval = "eval.csv";
}  // namespace files

std::string sequence_uid(const std::string& learner_id, const std::string& model_id);

// --- sequences.csv ----------------------------------------------------------

struct SequenceRow {
  std::string uid;
  ActivitySequence sequence;
};

void write_sequences_csv(const std::filesystem::path& path,
                         const std::vector<ActivitySequence>& sequences);
std::vector<SequenceRow> read_sequences_csv(const std::filesystem::path& path);

// --- models.csv (per-model activity records) --------------------------------

void write_model_records_csv(const std::filesystem::path& path,
                             const std::vector<ModelRecord>& models);
std::vector<ModelRecord> read_model_records_csv(const std::filesystem::path& path);

// --- segments.csv ------------------------------------------------------------

struct SegmentRow {
  std::string uid;
  std::size_t length = 0;
  std::string group;  // short | medium | long | removed
};

void write_segments_csv(const std::filesystem::path& path, const std::vector<SegmentRow>& rows);
std::vector<SegmentRow> read_segments_csv(const std::filesystem::path& path);

// --- assignments.csv ----------------------------------------------------------

struct AssignmentRow {
  std::string uid;
  std::string learner_id;
  std::string model_id;
  std::string group;
  std::size_t cluster = 0;         // per-group cluster index
  std::size_t merged_cluster = 0;  // index after cross-group merging
  std::string behavior;
};

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<AssignmentRow>& rows);
std::vector<AssignmentRow> read_assignments_csv(const std::filesystem::path& path);

// --- projection.csv -----------------------------------------------------------

struct ProjectionRow {
  std::string learner_id;
  double pc1 = 0.0;
  double pc2 = 0.0;
  std::size_t cluster = 0;
  std::string group_label;  // empty when excluded
  bool excluded = false;
};

void write_projection_csv(const std::filesystem::path& path,
                          const std::vector<ProjectionRow>& rows);
std::vector<ProjectionRow> read_projection_csv(const std::filesystem::path& path);

// --- quality.csv ---------------------------------------------------------------

struct QualityRow {
  std::string model_id;
  std::string behavior;  // empty when no behavior assignment exists
  std::size_t complexity = 0;
  std::size_t variety = 0;
  std::optional<std::size_t> component_categories;
  std::optional<std::size_t> relationship_categories;
};

void write_quality_csv(const std::filesystem::path& path, const std::vector<QualityRow>& rows,
                       bool split_variety);
std::vector<QualityRow> read_quality_csv(const std::filesystem::path& path);

// --- truth.csv ------------------------------------------------------------------

void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth);
GroundTruth read_truth_csv(const std::filesystem::path& path);

// --- event log / model documents -------------------------------------------------

void write_event_log_tsv(const std::filesystem::path& path, const std::vector<RawEvent>& events);
void write_models_json(const std::filesystem::path& path,
                       const std::vector<ConceptualModel>& models);

// Accepts a JSON file (object or array) or a directory of *.json files
// (loaded in sorted name order).
std::vector<ConceptualModel> load_models(const std::filesystem::path& path);

// --- misc -------------------------------------------------------------------------

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

// meta_<stage>.json: config echo, version, optional timing (opt-in because it
// breaks byte-level determinism).
void write_stage_meta(const std::filesystem::path& out_dir, const std::string& stage,
                      const nlohmann::json& config, std::optional<double> elapsed_ms);

}  // namespace seqmine::app
