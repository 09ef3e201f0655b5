#include "seqmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

#include "seqmine/rng.hpp"

namespace seqmine {

namespace {

constexpr std::int64_t kEpochBaseMs = 1'500'000'000'000;
constexpr std::int64_t kLearnerSpacingMs = 10'000'000'000;  // disjoint per-learner windows
constexpr double kMeanGapMs = 4000.0;
constexpr std::int64_t kMaxGapMs = 600'000;

const std::array<std::string, 5> kComponentCategories{"biotic", "abiotic", "habitat", "resource",
                                                      "climate"};
const std::array<std::string, 5> kRelationshipCategories{"consume", "produce", "destroy",
                                                         "affect", "depend"};
const std::array<std::string, 8> kSpeciesNames{"grass", "rabbit", "fox", "algae",
                                               "trout", "heron", "soil", "pond"};

void validate_archetype(const ArchetypeSpec& a) {
  auto check_dist = [](const std::array<double, 3>& row, const char* what) {
    double total = 0.0;
    for (double v : row) {
      if (v < 0.0) throw InvalidSpec(std::string(what) + ": negative probability");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw InvalidSpec(std::string(what) + ": probabilities do not sum to 1");
  };
  check_dist(a.initial, "archetype initial distribution");
  for (const auto& row : a.transition) check_dist(row, "archetype transition row");
  if (a.mean_length < 1.0) throw InvalidSpec("archetype mean length must be >= 1");
  if (a.copy_probability < 0.0 || a.copy_probability > 1.0)
    throw InvalidSpec("archetype copy probability outside [0, 1]");
  if (a.component_category_pool < 1 || a.component_category_pool > kComponentCategories.size())
    throw InvalidSpec("component category pool out of range");
  if (a.relationship_category_pool < 1 ||
      a.relationship_category_pool > kRelationshipCategories.size())
    throw InvalidSpec("relationship category pool out of range");
  if (a.length_dist == LengthDist::NegativeBinomial && a.negbin_r < 1)
    throw InvalidSpec("negative binomial shape must be >= 1");
}

std::size_t sample_length(const ArchetypeSpec& a, double scale, Rng& rng) {
  const double target = std::max(1.0, a.mean_length * scale);
  if (target <= 1.0) return 1;
  if (a.length_dist == LengthDist::Geometric) {
    // length = 1 + failures, success probability 1/target -> mean = target.
    return 1 + static_cast<std::size_t>(rng.geometric_failures(1.0 / target));
  }
  const double r = static_cast<double>(a.negbin_r);
  const double q = r / (r + target - 1.0);
  std::size_t total = 1;
  for (std::uint32_t i = 0; i < a.negbin_r; ++i)
    total += static_cast<std::size_t>(rng.geometric_failures(q));
  return total;
}

}  // namespace

std::array<double, 3> stationary_distribution(const ArchetypeSpec& archetype) {
  std::array<double, 3> pi = archetype.initial;
  for (int iter = 0; iter < 10000; ++iter) {
    std::array<double, 3> next{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) next[j] += pi[i] * archetype.transition[i][j];
    double delta = 0.0;
    for (std::size_t j = 0; j < 3; ++j) delta += std::fabs(next[j] - pi[j]);
    pi = next;
    if (delta < 1e-14) break;
  }
  return pi;
}

std::array<ArchetypeSpec, 3> default_archetypes() {
  ArchetypeSpec observation;
  observation.name = BehaviorType::Observation;
  observation.initial = {0.1, 0.5, 0.4};
  observation.transition = {{
      {0.06, 0.56, 0.38},  // from c
      {0.02, 0.33, 0.65},  // from p
      {0.02, 0.72, 0.26},  // from s
  }};
  // Negative binomial keeps each archetype's lengths in a band around its
  // target mean; a memoryless (geometric) choice makes the pooled length
  // density monotone, which leaves KDE segmentation nothing to cut.
  observation.length_dist = LengthDist::NegativeBinomial;
  observation.negbin_r = 40;
  observation.mean_length = 22.62;
  observation.copy_probability = 0.85;
  observation.copied_base_mean = 20.0;
  observation.component_category_pool = 2;
  observation.relationship_category_pool = 1;

  ArchetypeSpec construction;
  construction.name = BehaviorType::Construction;
  construction.initial = {0.9, 0.05, 0.05};
  construction.transition = {{
      {0.85, 0.09, 0.06},
      {0.60, 0.30, 0.10},
      {0.60, 0.10, 0.30},
  }};
  construction.length_dist = LengthDist::NegativeBinomial;
  construction.negbin_r = 40;
  construction.mean_length = 16.0;
  construction.copy_probability = 0.10;
  construction.copied_base_mean = 2.0;
  construction.component_category_pool = 1;
  construction.relationship_category_pool = 1;

  ArchetypeSpec full_cycle;
  full_cycle.name = BehaviorType::FullCycle;
  full_cycle.initial = {0.8, 0.1, 0.1};
  full_cycle.transition = {{
      {0.35, 0.50, 0.15},
      {0.15, 0.27, 0.58},
      {0.52, 0.16, 0.32},
  }};
  full_cycle.length_dist = LengthDist::NegativeBinomial;
  full_cycle.negbin_r = 20;
  full_cycle.mean_length = 154.73;
  full_cycle.copy_probability = 0.25;
  full_cycle.copied_base_mean = 4.0;
  full_cycle.component_category_pool = 2;
  full_cycle.relationship_category_pool = 2;

  return {observation, construction, full_cycle};
}

CohortSpec default_cohort(std::uint64_t seed) {
  CohortSpec cohort;
  cohort.seed = seed;
  cohort.groups = {
      {"A", 30, 2.8, 1.2, {0.45, 0.25, 0.30}},
      {"B", 30, 2.4, 1.0, {0.50, 0.25, 0.25}},
      {"C", 90, 3.8, 0.9, {0.38, 0.55, 0.07}},
      {"D", 150, 1.8, 0.8, {0.52, 0.44, 0.04}},
  };
  return cohort;
}

SynthOutput generate(const CohortSpec& cohort, const std::array<ArchetypeSpec, 3>& archetypes) {
  for (const auto& a : archetypes) validate_archetype(a);
  for (const auto& g : cohort.groups) {
    if (g.models_per_learner < 1.0) throw InvalidSpec("models per learner must be >= 1");
    if (g.action_scale <= 0.0) throw InvalidSpec("action scale must be positive");
    double total = 0.0;
    for (double v : g.behavior_mixture) {
      if (v < 0.0) throw InvalidSpec("behavior mixture: negative weight");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw InvalidSpec("behavior mixture does not sum to 1 for group " + g.label);
  }

  SynthOutput out;
  std::size_t learner_index = 0;
  std::size_t model_counter = 0;

  for (const auto& group : cohort.groups) {
    for (std::size_t u = 0; u < group.learners; ++u, ++learner_index) {
      Rng rng(mix_seed(cohort.seed, 0x4c000000ULL + learner_index));
      char learner_buf[16];
      std::snprintf(learner_buf, sizeof(learner_buf), "L%05zu", learner_index);
      const std::string learner_id(learner_buf);
      out.truth.learners.push_back({learner_id, group.label});

      std::int64_t clock = kEpochBaseMs + static_cast<std::int64_t>(learner_index) *
                                              kLearnerSpacingMs;
      auto advance = [&]() {
        const auto gap = static_cast<std::int64_t>(rng.exponential(kMeanGapMs)) + 1;
        clock += std::min(gap, kMaxGapMs);
        return clock;
      };

      const std::size_t n_models =
          1 + static_cast<std::size_t>(rng.geometric_failures(1.0 / group.models_per_learner));
      std::string previous_model_id;

      for (std::size_t m = 0; m < n_models; ++m, ++model_counter) {
        char model_buf[16];
        std::snprintf(model_buf, sizeof(model_buf), "M%06zu", model_counter);
        const std::string model_id(model_buf);

        const std::size_t type_idx = rng.categorical(std::span<const double>(
            group.behavior_mixture.data(), group.behavior_mixture.size()));
        const ArchetypeSpec& arch = archetypes[type_idx];
        out.truth.models.push_back({model_id, learner_id, arch.name});

        const bool copied = rng.next_double() < arch.copy_probability;

        RawEvent lifecycle;
        lifecycle.timestamp_ms = advance();
        lifecycle.learner_id = learner_id;
        lifecycle.model_id = model_id;
        if (copied) {
          lifecycle.kind = ActionKind::CopyModel;
          lifecycle.copied_from = previous_model_id.empty()
                                      ? "exemplar-" + std::to_string(rng.uniform_index(8))
                                      : previous_model_id;
        } else {
          lifecycle.kind = ActionKind::CreateModel;
        }
        out.events.push_back(std::move(lifecycle));

        // Markov walk over {c,p,s}.
        const std::size_t length = sample_length(arch, group.action_scale, rng);
        std::string symbols;
        symbols.reserve(length);
        std::size_t state = rng.categorical(
            std::span<const double>(arch.initial.data(), arch.initial.size()));
        for (std::size_t pos = 0; pos < length; ++pos) {
          symbols.push_back("cps"[state]);
          if (pos + 1 < length)
            state = rng.categorical(std::span<const double>(arch.transition[state].data(), 3));
        }

        // Model document: copied models inherit a base before edits land.
        ConceptualModel doc;
        doc.model_id = model_id;
        std::size_t base_total = 0;
        if (copied) {
          const double drawn = rng.normal(arch.copied_base_mean, arch.copied_base_mean / 4.0);
          base_total = static_cast<std::size_t>(std::max(1.0, std::round(drawn)));
        }
        std::size_t n_components = (base_total * 11 + 19) / 20;  // ceil(0.55 * base)
        std::size_t n_relationships = base_total - std::min(base_total, n_components);

        bool add_component_next = true;
        std::size_t construction_events = 0;
        for (char ch : symbols) {
          RawEvent ev;
          ev.timestamp_ms = advance();
          ev.learner_id = learner_id;
          ev.model_id = model_id;
          if (ch == 'c') {
            ev.kind = add_component_next ? ActionKind::AddComponent : ActionKind::AddRelationship;
            if (add_component_next)
              ++n_components;
            else
              ++n_relationships;
            add_component_next = !add_component_next;
            ++construction_events;
          } else if (ch == 'p') {
            ev.kind = ActionKind::SetParameter;
          } else {
            ev.kind = ActionKind::RunSimulation;
          }
          out.events.push_back(std::move(ev));
        }
        if (n_relationships > 0 && n_components == 0) n_components = 1;

        for (std::size_t ci = 0; ci < n_components; ++ci) {
          ModelComponent comp;
          comp.id = model_id + "-c" + std::to_string(ci);
          comp.category = kComponentCategories[rng.uniform_index(arch.component_category_pool)];
          comp.name = kSpeciesNames[rng.uniform_index(kSpeciesNames.size())];
          doc.parameters[comp.id]["initial_population"] =
              std::floor(rng.uniform(5.0, 500.0));
          doc.parameters[comp.id]["lifespan"] = std::floor(rng.uniform(1.0, 40.0));
          doc.components.push_back(std::move(comp));
        }
        for (std::size_t ri = 0; ri < n_relationships; ++ri) {
          ModelRelationship rel;
          rel.source = doc.components[ri % n_components].id;
          rel.target = doc.components[(ri + 1) % n_components].id;
          rel.category =
              kRelationshipCategories[rng.uniform_index(arch.relationship_category_pool)];
          doc.relationships.push_back(std::move(rel));
        }
        out.models.push_back(std::move(doc));
        previous_model_id = model_id;
      }
    }
  }
  return out;
}

double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  if (labels_a.size() != labels_b.size())
    throw LengthMismatch("adjusted_rand_index: labelings differ in length");
  const std::size_t n = labels_a.size();
  if (n < 2) return 1.0;

  std::map<std::pair<int, int>, std::uint64_t> cells;
  std::map<int, std::uint64_t> a_totals, b_totals;
  for (std::size_t i = 0; i < n; ++i) {
    ++cells[{labels_a[i], labels_b[i]}];
    ++a_totals[labels_a[i]];
    ++b_totals[labels_b[i]];
  }

  auto choose2 = [](std::uint64_t v) -> double {
    return 0.5 * static_cast<double>(v) * static_cast<double>(v - 1);
  };

  double sum_cells = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, v] : cells) sum_cells += choose2(v);
  for (const auto& [key, v] : a_totals) sum_a += choose2(v);
  for (const auto& [key, v] : b_totals) sum_b += choose2(v);

  const double pairs = choose2(n);
  const double expected = sum_a * sum_b / pairs;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // both partitions trivial and identical
  return (sum_cells - expected) / (maximum - expected);
}

std::vector<int> encode_labels(const std::vector<std::string>& labels) {
  std::map<std::string, int> codes;
  std::vector<int> encoded;
  encoded.reserve(labels.size());
  for (const auto& label : labels) {
    auto [it, inserted] = codes.try_emplace(label, static_cast<int>(codes.size()));
    encoded.push_back(it->second);
  }
  return encoded;
}

}  // namespace seqmine
