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

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/context_model.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

inline constexpr std::array<std::string_view, 10> kQualityMeasures = {
    "missing_values",     "data_inconsistency",     "null_count",
    "data_entry_error",   "outliers_detection",     "data_comparison",
    "cross_field_validation", "range_check",        "duplication_check",
    "format_validity"};

// ISO/IEC 25012 data quality characteristics.
inline constexpr std::array<std::string_view, 15> kQualityDimensions = {
    "accuracy",       "completeness",  "consistency",      "credibility",
    "currentness",    "accessibility", "compliance",       "confidentiality",
    "efficiency",     "precision",     "traceability",     "understandability",
    "availability",   "portability",   "recoverability"};

inline constexpr std::string_view kMeasureClass = "quality_measure";
inline constexpr std::string_view kDimensionClass = "quality_dimension";

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct GeneratorConfig {
  int n_contexts = 41;
  std::uint64_t seed = 7;
  IntRange attrs_per_context{20, 44};
  IntRange rules_per_attribute{1, 3};
  IntRange dims_per_rule{1, 2};
  double weight_min = 0.1;
  double weight_max = 1.0;
  std::vector<std::string> domain_pool = {"iot",     "social media", "healthcare",
                                          "radiation monitoring", "finance", "news",
                                          "retail",  "energy"};
  std::vector<std::string> source_pool = {"sensor network", "web api",
                                          "relational database", "data lake",
                                          "spreadsheet export", "message queue"};
  std::vector<std::string> format_pool = {"csv", "json", "parquet", "xml", "avro"};
  std::string context_prefix = "ctx";
  /// Sampling weight of a type's preferred measures relative to the others.
  double rule_affinity = 40.0;
};

inline void validate(const GeneratorConfig& cfg) {
  require(cfg.n_contexts >= 1, "n_contexts must be at least 1");
  auto check = [](const IntRange& r, const char* name, int min) {
    require(r.lo >= min && r.lo <= r.hi,
            std::string(name) + " range must be non-empty, ordered and >= " +
                std::to_string(min));
  };
  check(cfg.attrs_per_context, "attrs_per_context", 1);
  check(cfg.rules_per_attribute, "rules_per_attribute", 1);
  check(cfg.dims_per_rule, "dims_per_rule", 1);
  require(cfg.rules_per_attribute.hi <= static_cast<int>(kQualityMeasures.size()),
          "rules_per_attribute exceeds the measure inventory");
  require(cfg.dims_per_rule.hi <= static_cast<int>(kQualityDimensions.size()),
          "dims_per_rule exceeds the dimension inventory");
  require(0.0 <= cfg.weight_min && cfg.weight_min <= cfg.weight_max &&
              cfg.weight_max <= 1.0,
          "weight range must satisfy 0 <= min <= max <= 1");
  require(cfg.rule_affinity > 0.0 && std::isfinite(cfg.rule_affinity),
          "rule_affinity must be positive");
  require(!cfg.domain_pool.empty() && !cfg.source_pool.empty() &&
              !cfg.format_pool.empty(),
          "value pools must not be empty");
}

struct SyntheticGraph {
  TripleGraph graph;
  std::vector<AssessmentPlan> ground_truth;
  std::vector<ContextDescriptor> contexts;
};

namespace detail {

template <typename Pool>
const auto& pick(const Pool& pool, Rng& rng) {
  return pool[static_cast<std::size_t>(uniform_index(rng, pool.size()))];
}

// Weighted sampling of `count` distinct indices.
inline std::vector<std::size_t> sample_weighted(std::vector<double> weights,
                                                std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < count; ++k) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    std::size_t chosen = weights.size() - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      if (u < weights[i]) {
        chosen = i;
        break;
      }
      u -= weights[i];
    }
    while (weights[chosen] <= 0.0) --chosen;  // guards float round-off at the tail
    out.push_back(chosen);
    weights[chosen] = 0.0;
  }
  return out;
}

// Measures that usually apply to an attribute of the given type.
inline const std::set<std::string_view>& rule_affinity(AttributeType t) {
  static const std::set<std::string_view> numeric = {"range_check", "outliers_detection",
                                                     "data_entry_error"};
  static const std::set<std::string_view> text = {"duplication_check", "data_inconsistency",
                                                  "null_count"};
  static const std::set<std::string_view> date = {"format_validity", "data_comparison",
                                                  "cross_field_validation"};
  switch (t) {
    case AttributeType::kNumeric: return numeric;
    case AttributeType::kText: return text;
    case AttributeType::kDate: return date;
  }
  return text;
}

// Dimensions a measure usually feeds.
inline const std::set<std::string_view>& dimension_affinity(std::string_view rule) {
  static const std::map<std::string_view, std::set<std::string_view>> table = {
      {"missing_values", {"completeness", "availability"}},
      {"null_count", {"completeness", "accuracy"}},
      {"range_check", {"accuracy", "precision"}},
      {"outliers_detection", {"accuracy", "credibility"}},
      {"format_validity", {"compliance", "consistency"}},
      {"duplication_check", {"consistency", "efficiency"}},
      {"data_inconsistency", {"consistency", "credibility"}},
      {"cross_field_validation", {"consistency", "accuracy"}},
      {"data_entry_error", {"accuracy", "traceability"}},
      {"data_comparison", {"accuracy", "currentness"}}};
  static const std::set<std::string_view> none;
  auto it = table.find(rule);
  return it == table.end() ? none : it->second;
}

inline const std::vector<std::string>& attribute_name_pool(AttributeType t) {
  static const std::vector<std::string> numeric = {
      "dose_rate", "temperature", "humidity", "price",   "quantity",
      "battery_level", "rain_level", "pressure", "voltage", "heart_rate",
      "amount",  "score",  "latitude", "longitude", "speed", "age", "volume"};
  static const std::vector<std::string> text = {
      "location", "name", "category", "status", "sensor_id", "city",
      "country",  "email", "comment", "device_model", "label", "currency",
      "gender",   "address", "description"};
  static const std::vector<std::string> date = {
      "timestamp", "created_at", "updated_at", "birth_date", "measurement_time",
      "order_date", "expiry_date", "start_date", "end_date", "event_time"};
  switch (t) {
    case AttributeType::kNumeric: return numeric;
    case AttributeType::kText: return text;
    case AttributeType::kDate: return date;
  }
  return text;
}

}  // namespace detail

/// Builds a seeded graph of `n_contexts` data contexts, each with a
/// randomized assessment plan over the fixed measure/dimension inventory.
/// Measures are shared nodes, so each measure's dimension edges are drawn
/// once and shared by every plan that uses it.
inline SyntheticGraph generate_synthetic_graph(const GeneratorConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  auto weight = [&] { return uniform_real(rng, cfg.weight_min, cfg.weight_max); };

  std::vector<WeightedTriple> triples;
  for (auto m : kQualityMeasures)
    triples.push_back({std::string(m), std::string(rel::kIsA), std::string(kMeasureClass), 1.0});
  for (auto d : kQualityDimensions)
    triples.push_back({std::string(d), std::string(rel::kIsA), std::string(kDimensionClass), 1.0});

  std::map<std::string, std::vector<DimensionEdge>> rule_dims;
  for (auto m : kQualityMeasures) {
    const auto& pref = detail::dimension_affinity(m);
    std::vector<double> w;
    for (auto d : kQualityDimensions) w.push_back(pref.contains(d) ? 6.0 : 1.0);
    const auto count = static_cast<std::size_t>(
        uniform_int(rng, cfg.dims_per_rule.lo, cfg.dims_per_rule.hi));
    auto& edges = rule_dims[std::string(m)];
    for (auto i : detail::sample_weighted(w, count, rng))
      edges.push_back({std::string(m), std::string(kQualityDimensions[i]), weight(), std::nullopt});
    for (const auto& e : edges)
      triples.push_back({e.rule, std::string(rel::kContributesTo), e.dimension, e.weight});
  }

  static const std::vector<std::string> kSizes = {"tiny", "small", "medium", "large", "xlarge"};
  static const std::vector<std::string> kScopes = {"descriptive", "diagnostic", "predictive",
                                                   "real-time monitoring"};
  static const std::vector<std::string> kContent = {"measurements", "transactions",
                                                    "user generated content", "records", "logs"};
  static const std::vector<std::string> kStandards = {"ISO 8000", "ISO/IEC 25012", "GDPR",
                                                      "HIPAA", "ISO 9001"};
  static const std::vector<std::string> kPolicies = {"retention 5 years", "anonymization required",
                                                     "access audit", "encryption at rest"};
  static const std::vector<std::string> kSecurity = {"public", "internal", "confidential",
                                                     "restricted"};
  static const std::vector<std::string> kBudget = {"low", "moderate", "high"};
  static const std::vector<std::string> kTime = {"minutes", "hours", "days"};
  static constexpr std::array<AttributeType, 3> kTypes = {
      AttributeType::kNumeric, AttributeType::kText, AttributeType::kDate};

  SyntheticGraph out;
  const int width = cfg.n_contexts >= 1000 ? 4 : 3;
  for (int c = 0; c < cfg.n_contexts; ++c) {
    std::string num = std::to_string(c + 1);
    num.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(num.size()))), '0');

    ContextDescriptor ctx;
    ctx.context_id = cfg.context_prefix + "_" + num;
    ctx.data_type = uniform01(rng) < 0.8 ? DataType::kStructured : DataType::kSemiStructured;
    ctx.data_source = detail::pick(cfg.source_pool, rng);
    ctx.size_bucket = detail::pick(kSizes, rng);
    ctx.domain = detail::pick(cfg.domain_pool, rng);
    ctx.file_format = detail::pick(cfg.format_pool, rng);
    if (uniform01(rng) < 0.5) ctx.analysis_scope = detail::pick(kScopes, rng);
    if (uniform01(rng) < 0.5) ctx.content_type = detail::pick(kContent, rng);
    if (uniform01(rng) < 0.5) ctx.org_standards.push_back(detail::pick(kStandards, rng));
    if (uniform01(rng) < 0.5) ctx.org_policies.push_back(detail::pick(kPolicies, rng));
    if (uniform01(rng) < 0.5) ctx.security_level = detail::pick(kSecurity, rng);
    if (uniform01(rng) < 0.5) ctx.est_resources = detail::pick(kBudget, rng);
    if (uniform01(rng) < 0.5) ctx.est_time = detail::pick(kTime, rng);

    const int n_attrs = uniform_int(rng, cfg.attrs_per_context.lo, cfg.attrs_per_context.hi);
    std::set<std::string> used;
    for (int a = 0; a < n_attrs; ++a) {
      const AttributeType type = detail::pick(kTypes, rng);
      const std::string base = detail::pick(detail::attribute_name_pool(type), rng);
      std::string name = base;
      for (int k = 2; used.contains(name); ++k) name = base + "_" + std::to_string(k);
      used.insert(name);
      ctx.attributes.push_back({name, type});
    }

    AssessmentPlan plan;
    plan.context_id = ctx.context_id;
    std::set<std::string> plan_rules;
    for (const auto& attr : ctx.attributes) {
      const auto& pref = detail::rule_affinity(attr.type);
      std::vector<double> w;
      for (auto m : kQualityMeasures) w.push_back(pref.contains(m) ? cfg.rule_affinity : 1.0);
      const auto count = static_cast<std::size_t>(
          uniform_int(rng, cfg.rules_per_attribute.lo, cfg.rules_per_attribute.hi));
      for (auto i : detail::sample_weighted(w, count, rng)) {
        plan.rule_edges.push_back({attr.name, std::string(kQualityMeasures[i]), weight(), std::nullopt});
        plan_rules.insert(std::string(kQualityMeasures[i]));
      }
    }
    for (const auto& r : plan_rules)
      for (const auto& e : rule_dims[r]) plan.dimension_edges.push_back(e);
    plan.canonicalize();

    for (auto& t : context_to_triples(ctx)) triples.push_back(std::move(t));
    for (const auto& e : plan.rule_edges)
      triples.push_back({attribute_node(ctx.context_id, e.attribute),
                         std::string(rel::kHasQualityRule), e.rule, e.weight});
    out.contexts.push_back(std::move(ctx));
    out.ground_truth.push_back(std::move(plan));
  }
  out.graph = TripleGraph(std::move(triples));
  return out;
}

/// Adds a hand-written context and its plan edges to a generated graph.
/// Rule nodes are shared, so every recorded ground truth is re-extracted.
inline void inject_context(SyntheticGraph& g, const ContextDescriptor& ctx,
                           const AssessmentPlan& plan) {
  validate(ctx);
  if (plan.context_id != ctx.context_id)
    fail(ErrorKind::kInvalidArgument, "plan belongs to '" + plan.context_id + "', not '" +
                                          ctx.context_id + "'");
  if (has_context(g.graph, ctx.context_id))
    fail(ErrorKind::kInvalidArgument, "context id collision: '" + ctx.context_id + "'");
  std::set<std::string> names;
  for (const auto& a : ctx.attributes) names.insert(a.name);
  for (const auto& e : plan.rule_edges)
    if (!names.contains(e.attribute))
      fail(ErrorKind::kInvalidArgument, "plan attribute '" + e.attribute + "' is not in context '" +
                                            ctx.context_id + "'");
  auto triples = context_to_triples(ctx);
  for (auto& t : plan_to_triples(plan)) triples.push_back(std::move(t));
  g.graph = g.graph.merged_with(triples);
  g.contexts.push_back(ctx);
  g.ground_truth.push_back({});
  for (std::size_t i = 0; i < g.contexts.size(); ++i)
    g.ground_truth[i] = extract_plan(g.graph, g.contexts[i].context_id);
}

}  // namespace qakge
