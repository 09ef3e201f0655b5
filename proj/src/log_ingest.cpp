#include "seqmine/log_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>

namespace seqmine {

namespace {

constexpr std::array<std::pair<std::string_view, ActionKind>, 8> kActionTokens{{
    {"create_model", ActionKind::CreateModel},
    {"copy_model", ActionKind::CopyModel},
    {"add_component", ActionKind::AddComponent},
    {"remove_component", ActionKind::RemoveComponent},
    {"add_relationship", ActionKind::AddRelationship},
    {"remove_relationship", ActionKind::RemoveRelationship},
    {"set_parameter", ActionKind::SetParameter},
    {"run_simulation", ActionKind::RunSimulation},
}};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

RawEvent parse_tsv_line(std::string_view line, std::size_t line_no) {
  const auto fields = split_tabs(line);
  if (fields.size() != 4 && fields.size() != 5)
    throw MalformedRecord(line_no, "expected 4 or 5 tab-separated fields, got " +
                                       std::to_string(fields.size()));

  RawEvent ev;
  const std::string_view ts = fields[0];
  auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), ev.timestamp_ms);
  if (ec != std::errc{} || ptr != ts.data() + ts.size())
    throw MalformedRecord(line_no, "bad timestamp '" + std::string(ts) + "'");
  if (ev.timestamp_ms < 0) throw MalformedRecord(line_no, "negative timestamp");

  if (fields[1].empty()) throw MalformedRecord(line_no, "empty learner_id");
  if (fields[2].empty()) throw MalformedRecord(line_no, "empty model_id");
  ev.learner_id = std::string(fields[1]);
  ev.model_id = std::string(fields[2]);

  const auto kind = action_kind_from_token(fields[3]);
  if (!kind) throw UnknownActionKind(line_no, std::string(fields[3]));
  ev.kind = *kind;

  const std::string_view copied = fields.size() == 5 ? fields[4] : std::string_view{};
  if (ev.kind == ActionKind::CopyModel) {
    if (copied.empty()) throw MalformedRecord(line_no, "copy_model without copied_from");
    ev.copied_from = std::string(copied);
  } else if (!copied.empty()) {
    throw MalformedRecord(line_no, "copied_from set on non-copy action");
  }
  return ev;
}

RawEvent parse_json_line(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(line_no, std::string("invalid json: ") + e.what());
  }
  if (!obj.is_object()) throw MalformedRecord(line_no, "record is not an object");

  RawEvent ev;
  if (!obj.contains("ts") || !obj["ts"].is_number_integer())
    throw MalformedRecord(line_no, "missing or non-integer 'ts'");
  ev.timestamp_ms = obj["ts"].get<std::int64_t>();
  if (ev.timestamp_ms < 0) throw MalformedRecord(line_no, "negative timestamp");

  for (const char* key : {"learner", "model", "action"}) {
    if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty())
      throw MalformedRecord(line_no, std::string("missing or empty '") + key + "'");
  }
  ev.learner_id = obj["learner"].get<std::string>();
  ev.model_id = obj["model"].get<std::string>();

  const auto kind = action_kind_from_token(obj["action"].get<std::string>());
  if (!kind) throw UnknownActionKind(line_no, obj["action"].get<std::string>());
  ev.kind = *kind;

  const bool has_copied = obj.contains("copied_from") && !obj["copied_from"].is_null() &&
                          !(obj["copied_from"].is_string() && obj["copied_from"].empty());
  if (ev.kind == ActionKind::CopyModel) {
    if (!has_copied || !obj["copied_from"].is_string())
      throw MalformedRecord(line_no, "copy_model without copied_from");
    ev.copied_from = obj["copied_from"].get<std::string>();
  } else if (has_copied) {
    throw MalformedRecord(line_no, "copied_from set on non-copy action");
  }
  return ev;
}

}  // namespace

std::string_view to_token(ActionKind kind) {
  for (const auto& [token, k] : kActionTokens)
    if (k == kind) return token;
  return {};
}

std::optional<ActionKind> action_kind_from_token(std::string_view token) {
  for (const auto& [tok, kind] : kActionTokens)
    if (tok == token) return kind;
  return std::nullopt;
}

char symbol_of(ActivityClass cls) {
  switch (cls) {
    case ActivityClass::Construction: return 'c';
    case ActivityClass::Parameterization: return 'p';
    case ActivityClass::Simulation: return 's';
  }
  return '?';
}

std::optional<ActivityClass> classify_action(ActionKind kind) {
  switch (kind) {
    case ActionKind::AddComponent:
    case ActionKind::RemoveComponent:
    case ActionKind::AddRelationship:
    case ActionKind::RemoveRelationship:
      return ActivityClass::Construction;
    case ActionKind::SetParameter:
      return ActivityClass::Parameterization;
    case ActionKind::RunSimulation:
      return ActivityClass::Simulation;
    case ActionKind::CreateModel:
    case ActionKind::CopyModel:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<RawEvent> parse_event_log(std::istream& source, LogFormat format) {
  std::vector<RawEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    events.push_back(format == LogFormat::Tsv ? parse_tsv_line(line, line_no)
                                              : parse_json_line(line, line_no));
  }
  if (events.empty()) throw EmptyLog();
  return events;
}

IngestResult build_sequences(const std::vector<RawEvent>& events) {
  // Stable sort by timestamp keeps input order for ties and makes the whole
  // pipeline invariant to log shuffling.
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].timestamp_ms < events[b].timestamp_ms;
  });

  struct PairState {
    ModelRecord record;
    std::string symbols;
  };
  std::map<std::pair<std::string, std::string>, PairState> pairs;

  IngestResult out;
  out.total_events = events.size();

  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t pos = order[rank];
    const RawEvent& ev = events[pos];
    auto key = std::make_pair(ev.learner_id, ev.model_id);
    auto [it, inserted] = pairs.try_emplace(std::move(key));
    PairState& st = it->second;
    if (inserted) {
      st.record.learner_id = ev.learner_id;
      st.record.model_id = ev.model_id;
      st.record.first_ts = ev.timestamp_ms;
      st.record.first_pos = pos;
    }
    if (ev.kind == ActionKind::CopyModel) st.record.is_copied = true;
    if (const auto cls = classify_action(ev.kind)) {
      st.symbols.push_back(symbol_of(*cls));
      ++st.record.activity_counts[static_cast<std::size_t>(*cls)];
      ++out.classifiable_events;
    }
  }

  // Emit in (first_ts, first_pos) order so downstream per-learner model
  // ordering ("earliest to latest") falls out directly.
  std::vector<const PairState*> ordered;
  ordered.reserve(pairs.size());
  for (const auto& [key, st] : pairs) ordered.push_back(&st);
  std::sort(ordered.begin(), ordered.end(), [](const PairState* a, const PairState* b) {
    if (a->record.first_ts != b->record.first_ts) return a->record.first_ts < b->record.first_ts;
    return a->record.first_pos < b->record.first_pos;
  });

  for (const PairState* st : ordered) {
    out.models.push_back(st->record);
    if (st->symbols.empty()) {
      ++out.zero_activity_models;
    } else {
      out.sequences.push_back(ActivitySequence{st->record.learner_id, st->record.model_id,
                                               st->record.is_copied, st->symbols});
    }
  }
  return out;
}

SequenceSummary sequence_stats(const std::vector<ActivitySequence>& sequences) {
  if (sequences.empty()) throw EmptyCollection("sequence_stats: no sequences");

  std::vector<std::size_t> lengths;
  lengths.reserve(sequences.size());
  for (const auto& s : sequences) lengths.push_back(s.length());
  std::sort(lengths.begin(), lengths.end());

  SequenceSummary sum;
  sum.count = lengths.size();
  sum.min_length = lengths.front();
  sum.max_length = lengths.back();
  double total = 0.0;
  for (std::size_t v : lengths) total += static_cast<double>(v);
  sum.mean_length = total / static_cast<double>(lengths.size());
  const std::size_t mid = lengths.size() / 2;
  sum.median_length = (lengths.size() % 2 == 1)
                          ? static_cast<double>(lengths[mid])
                          : (static_cast<double>(lengths[mid - 1]) +
                             static_cast<double>(lengths[mid])) /
                                2.0;
  return sum;
}

}  // namespace seqmine
