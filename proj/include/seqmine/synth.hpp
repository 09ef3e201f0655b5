#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "seqmine/log_ingest.hpp"
#include "seqmine/model_quality.hpp"
#include "seqmine/seq_cluster.hpp"

namespace seqmine {

enum class LengthDist { Geometric, NegativeBinomial };

// A planted behavior archetype: a Markov chain over {c,p,s} plus the knobs
// that shape the generated model documents.
struct ArchetypeSpec {
  BehaviorType name = BehaviorType::Observation;
  std::array<double, 3> initial{};                  // over c, p, s
  std::array<std::array<double, 3>, 3> transition{};  // rows sum to 1
  LengthDist length_dist = LengthDist::Geometric;
  double mean_length = 1.0;   // target mean session length (>= 1)
  std::uint32_t negbin_r = 4;  // shape when length_dist == NegativeBinomial
  double copy_probability = 0.0;
  // Model-document shaping: size of the pre-existing content a copied model
  // starts from, and how many distinct category tokens the archetype uses.
  double copied_base_mean = 4.0;
  std::uint32_t component_category_pool = 2;
  std::uint32_t relationship_category_pool = 2;
};

// Stationary distribution of the archetype's symbol chain (power iteration).
std::array<double, 3> stationary_distribution(const ArchetypeSpec& spec);

// The three built-in archetypes, length means 22.62 / 16 / 154.73 for
// Observation / Construction / FullCycle. All fields can be overridden
// through configuration before generation.
std::array<ArchetypeSpec, 3> default_archetypes();

struct EngagementArchetype {
  std::string label;                    // "A".."D"
  std::size_t learners = 0;
  double models_per_learner = 1.0;      // mean, geometric, >= 1
  double action_scale = 1.0;            // multiplies archetype mean lengths
  std::array<double, 3> behavior_mixture{};  // over Observation/Construction/FullCycle
};

struct CohortSpec {
  std::vector<EngagementArchetype> groups;
  std::uint64_t seed = 0;
};

// Defaults sized to roughly 300 learners / 800 models across four
// engagement tiers with tier-dependent behavior mixtures.
CohortSpec default_cohort(std::uint64_t seed);

struct ModelTruth {
  std::string model_id;
  std::string learner_id;
  BehaviorType behavior;
};

struct LearnerTruth {
  std::string learner_id;
  std::string engagement;  // cohort group label
};

struct GroundTruth {
  std::vector<ModelTruth> models;
  std::vector<LearnerTruth> learners;
};

struct SynthOutput {
  std::vector<RawEvent> events;
  std::vector<ConceptualModel> models;
  GroundTruth truth;
};

// Deterministic generation: each learner draws from a sub-seeded stream, so
// output is byte-stable regardless of how learners would be scheduled.
SynthOutput generate(const CohortSpec& cohort,
                     const std::array<ArchetypeSpec, 3>& archetypes = default_archetypes());

// Chance-corrected partition agreement via the pair-counting contingency
// table. Throws LengthMismatch on unequal sizes.
double adjusted_rand_index(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

// Convenience: map arbitrary string labels onto dense integer codes.
std::vector<int> encode_labels(const std::vector<std::string>& labels);

}  // namespace seqmine
