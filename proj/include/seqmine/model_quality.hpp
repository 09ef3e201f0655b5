#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqmine/errors.hpp"

namespace seqmine {

struct ModelComponent {
  std::string id;
  std::string category;  // e.g. biotic, abiotic
  std::string name;
};

struct ModelRelationship {
  std::string source;
  std::string target;
  std::string category;  // e.g. consume, destroy
};

// A conceptual model: typed components, typed relationships between them,
// and per-element simulation parameters (carried, never scored).
struct ConceptualModel {
  std::string model_id;
  std::vector<ModelComponent> components;
  std::vector<ModelRelationship> relationships;
  std::map<std::string, std::map<std::string, double>> parameters;  // element id -> name -> value
};

// Validates and converts one model object. Throws SchemaError,
// DuplicateComponentId, or DanglingEndpoint.
ConceptualModel parse_model(const nlohmann::json& document);

// A file may hold one model object or an array of them.
std::vector<ConceptualModel> parse_models(const nlohmann::json& document);

nlohmann::json to_json(const ConceptualModel& model);

// Total number of components and relationships ("depth").
std::size_t complexity(const ConceptualModel& model);

// Distinct category tokens across components and relationships pooled
// ("breadth").
std::size_t variety(const ConceptualModel& model);

struct VarietySplit {
  std::size_t component_categories = 0;
  std::size_t relationship_categories = 0;
};

VarietySplit variety_split(const ConceptualModel& model);

}  // namespace seqmine
