// Copyright 2026 The QAKGE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>

#include "qakge/synth_graph.hpp"
#include "support.hpp"

namespace qakge {
namespace {

std::set<std::string> typed_as(const TripleGraph& g, std::string_view cls) {
  std::set<std::string> out;
  for (const auto& t : g.triples())
    if (t.relation == rel::kIsA && t.target == cls) out.insert(t.source);
  return out;
}

TEST(SynthGraph, PaperScaleShape) {
  const auto g = generate_synthetic_graph({});
  EXPECT_EQ(context_ids(g.graph).size(), 41u);
  EXPECT_EQ(g.ground_truth.size(), 41u);
  EXPECT_GE(g.graph.size(), 4500u);
  EXPECT_LE(g.graph.size(), 7000u);
  EXPECT_EQ(typed_as(g.graph, kMeasureClass).size(), 10u);
  EXPECT_EQ(typed_as(g.graph, kDimensionClass).size(), 15u);
}

TEST(SynthGraph, FixedInventory) {
  const auto g = generate_synthetic_graph({});
  EXPECT_EQ(typed_as(g.graph, kMeasureClass),
            (std::set<std::string>{"missing_values", "data_inconsistency", "null_count",
                                   "data_entry_error", "outliers_detection", "data_comparison",
                                   "cross_field_validation", "range_check", "duplication_check",
                                   "format_validity"}));
  EXPECT_EQ(typed_as(g.graph, kDimensionClass),
            (std::set<std::string>{"accuracy", "completeness", "consistency", "credibility",
                                   "currentness", "accessibility", "compliance",
                                   "confidentiality", "efficiency", "precision", "traceability",
                                   "understandability", "availability", "portability",
                                   "recoverability"}));
  for (const auto& p : g.ground_truth) {
    for (const auto& r : p.rules()) EXPECT_TRUE(typed_as(g.graph, kMeasureClass).contains(r));
    for (const auto& d : p.dimensions())
      EXPECT_TRUE(typed_as(g.graph, kDimensionClass).contains(d));
  }
}

TEST(SynthGraph, PlanWeightsWithinRange) {
  const auto g = generate_synthetic_graph({});
  for (const auto& p : g.ground_truth) {
    EXPECT_FALSE(p.rule_edges.empty());
    for (const auto& e : p.rule_edges) {
      EXPECT_GE(e.weight, 0.1);
      EXPECT_LE(e.weight, 1.0);
    }
    for (const auto& e : p.dimension_edges) {
      EXPECT_GE(e.weight, 0.1);
      EXPECT_LE(e.weight, 1.0);
    }
    EXPECT_NO_THROW(validate(p));
  }
}

TEST(SynthGraph, RespectsConfiguredRanges) {
  GeneratorConfig cfg;
  cfg.n_contexts = 9;
  cfg.attrs_per_context = {2, 4};
  cfg.rules_per_attribute = {1, 2};
  cfg.seed = 3;
  const auto g = generate_synthetic_graph(cfg);
  for (std::size_t i = 0; i < g.contexts.size(); ++i) {
    const auto& c = g.contexts[i];
    EXPECT_GE(c.attributes.size(), 2u);
    EXPECT_LE(c.attributes.size(), 4u);
    std::map<std::string, int> per_attr;
    for (const auto& e : g.ground_truth[i].rule_edges) ++per_attr[e.attribute];
    EXPECT_EQ(per_attr.size(), c.attributes.size());
    for (const auto& [a, n] : per_attr) {
      EXPECT_GE(n, 1);
      EXPECT_LE(n, 2);
    }
  }
}

TEST(SynthGraph, DegenerateRangesGiveOneEdgePair) {
  GeneratorConfig cfg;
  cfg.n_contexts = 1;
  cfg.attrs_per_context = {1, 1};
  cfg.rules_per_attribute = {1, 1};
  cfg.dims_per_rule = {1, 1};
  const auto g = generate_synthetic_graph(cfg);
  ASSERT_EQ(g.ground_truth.size(), 1u);
  EXPECT_EQ(g.ground_truth[0].rule_edges.size(), 1u);
  EXPECT_EQ(g.ground_truth[0].dimension_edges.size(), 1u);
}

TEST(SynthGraph, SeedDeterminesCsvBytes) {
  testing::TempDir dir;
  save_triples_csv(generate_synthetic_graph({}).graph, dir / "a.csv");
  save_triples_csv(generate_synthetic_graph({}).graph, dir / "b.csv");
  EXPECT_EQ(testing::read_file(dir / "a.csv"), testing::read_file(dir / "b.csv"));
  GeneratorConfig other;
  other.seed = 8;
  save_triples_csv(generate_synthetic_graph(other).graph, dir / "c.csv");
  EXPECT_NE(testing::read_file(dir / "a.csv"), testing::read_file(dir / "c.csv"));
}

TEST(SynthGraph, ContextIdsAreZeroPadded) {
  const auto ids = context_ids(generate_synthetic_graph({}).graph);
  EXPECT_EQ(ids.front(), "ctx_001");
  EXPECT_EQ(ids.back(), "ctx_041");
}

TEST(SynthGraph, InvalidConfigs) {
  auto bad = [](auto mutate) {
    GeneratorConfig c;
    mutate(c);
    EXPECT_THROW(generate_synthetic_graph(c), Error);
  };
  bad([](GeneratorConfig& c) { c.n_contexts = 0; });
  bad([](GeneratorConfig& c) { c.attrs_per_context = {5, 4}; });
  bad([](GeneratorConfig& c) { c.rules_per_attribute = {0, 2}; });
  bad([](GeneratorConfig& c) { c.rules_per_attribute = {1, 11}; });
  bad([](GeneratorConfig& c) { c.dims_per_rule = {1, 16}; });
  bad([](GeneratorConfig& c) { c.weight_min = 0.9; c.weight_max = 0.1; });
  bad([](GeneratorConfig& c) { c.domain_pool.clear(); });
}

TEST(InjectContext, AddsContextAndKeepsGroundTruthConsistent) {
  auto g = testing::radiation_scenario_graph();
  const auto stored = testing::stored_radiation_context();
  EXPECT_EQ(triples_to_context(g.graph, stored.context_id), stored);
  const auto plan = extract_plan(g.graph, stored.context_id);
  EXPECT_EQ(plan.rule_edges, testing::stored_radiation_plan().rule_edges);
  EXPECT_EQ(plan.attributes().size(), 3u);
  EXPECT_EQ(plan.rules().size(), 7u);
  const auto before = generate_synthetic_graph(testing::radiation_generator_config());
  ASSERT_EQ(g.contexts.size(), before.contexts.size() + 1);
  for (std::size_t i = 0; i < before.contexts.size(); ++i)
    EXPECT_EQ(g.ground_truth[i], before.ground_truth[i]);
  EXPECT_EQ(g.graph.size(),
            before.graph.size() + context_to_triples(stored).size() + 7u);
}

TEST(InjectContext, Errors) {
  auto g = testing::radiation_scenario_graph();
  EXPECT_THROW(inject_context(g, testing::stored_radiation_context(),
                              testing::stored_radiation_plan()),
               Error);
  auto other = testing::query_radiation_context();
  EXPECT_THROW(inject_context(g, other, testing::stored_radiation_plan()), Error);
  AssessmentPlan foreign;
  foreign.context_id = other.context_id;
  foreign.rule_edges = {{"sensor_id", "null_count", 0.5, std::nullopt}};
  EXPECT_THROW(inject_context(g, other, foreign), Error);
}

}  // namespace
}  // namespace qakge
