#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqmine/errors.hpp"

namespace seqmine {

// The eight action tokens a log line may carry. The first two are model
// lifecycle markers, the remaining six are learner activities.
enum class ActionKind {
  CreateModel,
  CopyModel,
  AddComponent,
  RemoveComponent,
  AddRelationship,
  RemoveRelationship,
  SetParameter,
  RunSimulation,
};

std::string_view to_token(ActionKind kind);
std::optional<ActionKind> action_kind_from_token(std::string_view token);

// Construction 'c', Parameterization 'p', Simulation 's'.
enum class ActivityClass { Construction, Parameterization, Simulation };

char symbol_of(ActivityClass cls);

// Lifecycle tokens (create_model, copy_model) map to nullopt: they mark that
// a model exists, not that the learner acted on it.
std::optional<ActivityClass> classify_action(ActionKind kind);

struct RawEvent {
  std::int64_t timestamp_ms = 0;
  std::string learner_id;
  std::string model_id;
  ActionKind kind = ActionKind::CreateModel;
  std::optional<std::string> copied_from;  // present iff kind == CopyModel
};

enum class LogFormat { Tsv, JsonLines };

// Parses a line-delimited log. TSV fields, in order: timestamp_ms,
// learner_id, model_id, action_kind, copied_from (empty when absent).
// JsonLines expects one object per line with keys ts, learner, model,
// action, copied_from. Lines starting with '#' and blank lines are skipped.
// Throws MalformedRecord / UnknownActionKind with the offending line number,
// EmptyLog when no valid record remains.
std::vector<RawEvent> parse_event_log(std::istream& source, LogFormat format = LogFormat::Tsv);

struct ActivitySequence {
  std::string learner_id;
  std::string model_id;
  bool is_copied = false;
  std::string symbols;  // over {c,p,s}, never empty

  std::size_t length() const { return symbols.size(); }
};

// One row per (learner, model) pair seen in the log, kept even when the pair
// has no classifiable activity. activity_counts holds the c/p/s counts.
struct ModelRecord {
  std::string learner_id;
  std::string model_id;
  bool is_copied = false;
  std::int64_t first_ts = 0;        // earliest event of any kind
  std::size_t first_pos = 0;        // input position of that event (tie-break)
  std::array<std::uint64_t, 3> activity_counts{0, 0, 0};
};

struct IngestResult {
  std::vector<ActivitySequence> sequences;  // pairs with >= 1 activity
  std::vector<ModelRecord> models;          // every pair, zero-activity included
  std::size_t zero_activity_models = 0;
  std::size_t total_events = 0;
  std::size_t classifiable_events = 0;
};

// Orders events by (timestamp, input position) and emits one activity
// sequence per (learner, model) pair with at least one classifiable event.
// Input order does not matter; ties keep input order.
IngestResult build_sequences(const std::vector<RawEvent>& events);

struct SequenceSummary {
  std::size_t count = 0;
  double mean_length = 0.0;
  double median_length = 0.0;
  std::size_t min_length = 0;
  std::size_t max_length = 0;
};

// Exact length statistics; even-count median averages the two middle values.
SequenceSummary sequence_stats(const std::vector<ActivitySequence>& sequences);

}  // namespace seqmine
