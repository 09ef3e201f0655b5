#include <doctest.h>

#include <algorithm>
#include <nlohmann/json.hpp>

#include "seqmine/model_quality.hpp"

using namespace seqmine;
using nlohmann::json;

namespace {

json minimal_model() {
  return json::parse(R"({
    "id": "m1",
    "components": [
      {"id": "c1", "category": "biotic", "name": "rabbit"},
      {"id": "c2", "category": "biotic", "name": "grass"}
    ],
    "relationships": [
      {"source": "c1", "target": "c2", "category": "consume"}
    ],
    "parameters": {"c1": {"initial_population": 20, "lifespan": 4}}
  })");
}

}  // namespace

TEST_SUITE("model_quality") {

TEST_CASE("a well-formed model parses") {
  const ConceptualModel m = parse_model(minimal_model());
  CHECK(m.model_id == "m1");
  CHECK(m.components.size() == 2);
  CHECK(m.relationships.size() == 1);
  CHECK(m.parameters.at("c1").at("lifespan") == 4.0);
}

TEST_CASE("empty component and relationship lists are valid") {
  const ConceptualModel m = parse_model(json::parse(R"({"id": "empty"})"));
  CHECK(complexity(m) == 0);
  CHECK(variety(m) == 0);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_AS(parse_model(json::parse("[1,2]")), SchemaError);
  CHECK_THROWS_AS(parse_model(json::parse(R"({"components": []})")), SchemaError);  // no id
  CHECK_THROWS_AS(parse_model(json::parse(R"({"id": "x", "components": {}})")), SchemaError);
  CHECK_THROWS_AS(
      parse_model(json::parse(R"({"id": "x", "components": [{"id": "c"}]})")),
      SchemaError);  // missing category
  CHECK_THROWS_AS(
      parse_model(json::parse(R"({"id": "x", "parameters": {"c": {"p": "NaN"}}})")),
      SchemaError);  // non-numeric parameter
}

TEST_CASE("dangling relationship endpoints are rejected") {
  json doc = minimal_model();
  doc["relationships"][0]["target"] = "ghost";
  CHECK_THROWS_AS(parse_model(doc), DanglingEndpoint);
  doc["relationships"][0] = {{"source", "ghost"}, {"target", "c1"}, {"category", "consume"}};
  CHECK_THROWS_AS(parse_model(doc), DanglingEndpoint);
}

TEST_CASE("duplicate component ids are rejected") {
  json doc = minimal_model();
  doc["components"][1]["id"] = "c1";
  CHECK_THROWS_AS(parse_model(doc), DuplicateComponentId);
}

TEST_CASE("complexity counts components plus relationships") {
  json doc = json::parse(R"({"id": "x", "components": [], "relationships": []})");
  for (int i = 0; i < 5; ++i)
    doc["components"].push_back({{"id", "c" + std::to_string(i)}, {"category", "biotic"}});
  for (int i = 0; i < 4; ++i)
    doc["relationships"].push_back({{"source", "c0"},
                                    {"target", "c" + std::to_string(i + 1)},
                                    {"category", "consume"}});
  const ConceptualModel m = parse_model(doc);
  CHECK(complexity(m) == 9);

  doc["relationships"].push_back({{"source", "c1"}, {"target", "c2"}, {"category", "affect"}});
  CHECK(complexity(parse_model(doc)) == 10);
}

TEST_CASE("variety counts distinct categories pooled across element kinds") {
  const ConceptualModel m = parse_model(minimal_model());
  CHECK(variety(m) == 2);  // biotic + consume

  // Duplicating every element leaves variety unchanged.
  json doc = minimal_model();
  doc["components"].push_back({{"id", "c3"}, {"category", "biotic"}, {"name", "fern"}});
  doc["relationships"].push_back({{"source", "c2"}, {"target", "c3"}, {"category", "consume"}});
  CHECK(variety(parse_model(doc)) == 2);

  const VarietySplit split = variety_split(m);
  CHECK(split.component_categories == 1);
  CHECK(split.relationship_categories == 1);
}

TEST_CASE("variety never exceeds complexity") {
  const ConceptualModel m = parse_model(minimal_model());
  CHECK(variety(m) <= complexity(m));
}

TEST_CASE("scores are invariant under element reordering") {
  json doc = minimal_model();
  json reordered = doc;
  std::swap(reordered["components"][0], reordered["components"][1]);
  CHECK(complexity(parse_model(doc)) == complexity(parse_model(reordered)));
  CHECK(variety(parse_model(doc)) == variety(parse_model(reordered)));
}

TEST_CASE("a file may hold one model or a list") {
  const auto one = parse_models(minimal_model());
  CHECK(one.size() == 1);
  json list = json::array({minimal_model(), json::parse(R"({"id": "m2"})")});
  const auto two = parse_models(list);
  REQUIRE(two.size() == 2);
  CHECK(two[1].model_id == "m2");
}

TEST_CASE("to_json round-trips through parse_model") {
  const ConceptualModel m = parse_model(minimal_model());
  const ConceptualModel again = parse_model(to_json(m));
  CHECK(again.model_id == m.model_id);
  CHECK(again.components.size() == m.components.size());
  CHECK(again.relationships.size() == m.relationships.size());
  CHECK(again.parameters == m.parameters);
}

}  // TEST_SUITE
