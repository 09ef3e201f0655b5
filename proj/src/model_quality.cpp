#include "seqmine/model_quality.hpp"

#include <nlohmann/json.hpp>
#include <set>
#include <unordered_set>

namespace seqmine {

namespace {

std::string require_string(const nlohmann::json& obj, const char* key, const char* context) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw SchemaError(std::string(context) + ": missing or non-string '" + key + "'");
  return obj[key].get<std::string>();
}

}  // namespace

ConceptualModel parse_model(const nlohmann::json& document) {
  if (!document.is_object()) throw SchemaError("model document is not an object");

  ConceptualModel model;
  model.model_id = require_string(document, "id", "model");

  std::unordered_set<std::string> component_ids;
  if (document.contains("components")) {
    if (!document["components"].is_array()) throw SchemaError("'components' is not an array");
    for (const auto& entry : document["components"]) {
      if (!entry.is_object()) throw SchemaError("component entry is not an object");
      ModelComponent c;
      c.id = require_string(entry, "id", "component");
      c.category = require_string(entry, "category", "component");
      c.name = entry.contains("name") && entry["name"].is_string()
                   ? entry["name"].get<std::string>()
                   : std::string{};
      if (!component_ids.insert(c.id).second)
        throw DuplicateComponentId("duplicate component id '" + c.id + "'");
      model.components.push_back(std::move(c));
    }
  }

  if (document.contains("relationships")) {
    if (!document["relationships"].is_array())
      throw SchemaError("'relationships' is not an array");
    for (const auto& entry : document["relationships"]) {
      if (!entry.is_object()) throw SchemaError("relationship entry is not an object");
      ModelRelationship r;
      r.source = require_string(entry, "source", "relationship");
      r.target = require_string(entry, "target", "relationship");
      r.category = require_string(entry, "category", "relationship");
      if (!component_ids.count(r.source))
        throw DanglingEndpoint("relationship source '" + r.source + "' is not a component");
      if (!component_ids.count(r.target))
        throw DanglingEndpoint("relationship target '" + r.target + "' is not a component");
      model.relationships.push_back(std::move(r));
    }
  }

  if (document.contains("parameters")) {
    if (!document["parameters"].is_object()) throw SchemaError("'parameters' is not an object");
    for (const auto& [element, values] : document["parameters"].items()) {
      if (!values.is_object())
        throw SchemaError("parameters for '" + element + "' are not an object");
      for (const auto& [name, value] : values.items()) {
        if (!value.is_number())
          throw SchemaError("parameter '" + name + "' of '" + element + "' is not a number");
        model.parameters[element][name] = value.get<double>();
      }
    }
  }
  return model;
}

std::vector<ConceptualModel> parse_models(const nlohmann::json& document) {
  std::vector<ConceptualModel> models;
  if (document.is_array()) {
    for (const auto& entry : document) models.push_back(parse_model(entry));
  } else {
    models.push_back(parse_model(document));
  }
  return models;
}

nlohmann::json to_json(const ConceptualModel& model) {
  nlohmann::json doc;
  doc["id"] = model.model_id;
  doc["components"] = nlohmann::json::array();
  for (const auto& c : model.components)
    doc["components"].push_back({{"id", c.id}, {"category", c.category}, {"name", c.name}});
  doc["relationships"] = nlohmann::json::array();
  for (const auto& r : model.relationships)
    doc["relationships"].push_back(
        {{"source", r.source}, {"target", r.target}, {"category", r.category}});
  doc["parameters"] = nlohmann::json::object();
  for (const auto& [element, values] : model.parameters) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [name, value] : values) entry[name] = value;
    doc["parameters"][element] = std::move(entry);
  }
  return doc;
}

std::size_t complexity(const ConceptualModel& model) {
  return model.components.size() + model.relationships.size();
}

std::size_t variety(const ConceptualModel& model) {
  std::set<std::string> categories;
  for (const auto& c : model.components) categories.insert(c.category);
  for (const auto& r : model.relationships) categories.insert(r.category);
  return categories.size();
}

VarietySplit variety_split(const ConceptualModel& model) {
  std::set<std::string> comp, rel;
  for (const auto& c : model.components) comp.insert(c.category);
  for (const auto& r : model.relationships) rel.insert(r.category);
  return {comp.size(), rel.size()};
}

}  // namespace seqmine
