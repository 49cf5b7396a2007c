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
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "qakge/common.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

namespace rel {
inline constexpr std::string_view kHasSchema = "hasSchema";
inline constexpr std::string_view kHasAttribute = "hasAttribute";
inline constexpr std::string_view kHasType = "hasType";
inline constexpr std::string_view kHasDataType = "hasDataType";
inline constexpr std::string_view kHasDataSource = "hasDataSource";
inline constexpr std::string_view kHasSizeBucket = "hasSizeBucket";
inline constexpr std::string_view kHasAnalysisScope = "hasAnalysisScope";
inline constexpr std::string_view kHasDomain = "hasDomain";
inline constexpr std::string_view kHasContentType = "hasContentType";
inline constexpr std::string_view kHasFileFormat = "hasFileFormat";
inline constexpr std::string_view kHasStandard = "hasStandard";
inline constexpr std::string_view kHasPolicy = "hasPolicy";
inline constexpr std::string_view kHasSecurityLevel = "hasSecurityLevel";
inline constexpr std::string_view kHasResourceBudget = "hasResourceBudget";
inline constexpr std::string_view kHasTimeBudget = "hasTimeBudget";
inline constexpr std::string_view kHasQualityRule = "hasQualityRule";
inline constexpr std::string_view kContributesTo = "contributesTo";
// Inventory typing of rule/dimension nodes; not part of a context subgraph.
inline constexpr std::string_view kIsA = "isA";
}  // namespace rel

enum class AttributeType { kDate, kText, kNumeric };
enum class DataType { kStructured, kSemiStructured, kUnstructured };

inline std::string_view to_string(AttributeType t) {
  switch (t) {
    case AttributeType::kDate: return "date";
    case AttributeType::kText: return "text";
    case AttributeType::kNumeric: return "numeric";
  }
  return "text";
}

inline std::optional<AttributeType> parse_attribute_type(std::string_view s) {
  if (s == "date") return AttributeType::kDate;
  if (s == "text") return AttributeType::kText;
  if (s == "numeric") return AttributeType::kNumeric;
  return std::nullopt;
}

inline std::string_view to_string(DataType t) {
  switch (t) {
    case DataType::kStructured: return "structured";
    case DataType::kSemiStructured: return "semi-structured";
    case DataType::kUnstructured: return "unstructured";
  }
  return "structured";
}

inline std::optional<DataType> parse_data_type(std::string_view s) {
  if (s == "structured") return DataType::kStructured;
  if (s == "semi-structured") return DataType::kSemiStructured;
  if (s == "unstructured") return DataType::kUnstructured;
  return std::nullopt;
}

struct Attribute {
  std::string name;
  AttributeType type = AttributeType::kText;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// Descriptive characteristics of one dataset. Plain text fields count as
/// unpopulated when empty; optional fields when absent.
struct ContextDescriptor {
  std::string context_id;
  DataType data_type = DataType::kStructured;
  std::vector<Attribute> attributes;
  std::string data_source;
  std::string size_bucket;
  std::optional<std::string> analysis_scope;
  std::string domain;
  std::optional<std::string> content_type;
  std::string file_format;
  std::vector<std::string> org_standards;
  std::vector<std::string> org_policies;
  std::optional<std::string> security_level;
  std::optional<std::string> est_resources;
  std::optional<std::string> est_time;

  friend bool operator==(const ContextDescriptor&, const ContextDescriptor&) = default;
};

inline std::string schema_node(std::string_view context_id) {
  return std::string(context_id) + "_schema";
}

inline std::string attribute_node(std::string_view context_id,
                                  std::string_view attribute) {
  return std::string(context_id) + "_attr_" + std::string(attribute);
}

/// Row-count buckets by order of magnitude.
inline std::string size_bucket_for_rows(std::uint64_t rows) {
  if (rows < 1'000ULL) return "tiny";
  if (rows < 100'000ULL) return "small";
  if (rows < 10'000'000ULL) return "medium";
  if (rows < 1'000'000'000ULL) return "large";
  return "xlarge";
}

inline void validate(const ContextDescriptor& ctx) {
  const std::string who = "context '" + ctx.context_id + "': ";
  require(!ctx.context_id.empty(), "context_id must not be empty");
  if (ctx.data_type != DataType::kUnstructured)
    require(!ctx.attributes.empty(),
            who + "structured and semi-structured contexts need attributes");
  std::unordered_set<std::string> names;
  for (const auto& a : ctx.attributes) {
    require(!a.name.empty(), who + "attribute name must not be empty");
    require(names.insert(a.name).second,
            who + "duplicate attribute '" + a.name + "'");
  }
  for (const auto* opt : {&ctx.analysis_scope, &ctx.content_type,
                          &ctx.security_level, &ctx.est_resources,
                          &ctx.est_time}) {
    require(!opt->has_value() || !(*opt)->empty(),
            who + "optional fields must be absent rather than empty");
  }
  for (const auto* list : {&ctx.org_standards, &ctx.org_policies}) {
    std::unordered_set<std::string> seen;
    for (const auto& s : *list) {
      require(!s.empty(), who + "empty list entry");
      require(seen.insert(s).second, who + "duplicate list entry '" + s + "'");
    }
  }
}

/// Canonical triple image of a context: context, schema and attribute nodes
/// plus one edge per populated field. All weights are 1.0.
inline std::vector<WeightedTriple> context_to_triples(const ContextDescriptor& ctx) {
  validate(ctx);
  std::vector<WeightedTriple> out;
  const std::string& id = ctx.context_id;
  auto emit = [&](std::string_view relation, const std::string& value) {
    out.push_back({id, std::string(relation), value, 1.0});
  };
  auto emit_if = [&](std::string_view relation, const std::string& value) {
    if (!value.empty()) emit(relation, value);
  };
  auto emit_opt = [&](std::string_view relation,
                      const std::optional<std::string>& value) {
    if (value) emit(relation, *value);
  };

  const std::string schema = schema_node(id);
  emit(rel::kHasSchema, schema);
  emit(rel::kHasDataType, std::string(to_string(ctx.data_type)));
  emit_if(rel::kHasDataSource, ctx.data_source);
  emit_if(rel::kHasSizeBucket, ctx.size_bucket);
  emit_opt(rel::kHasAnalysisScope, ctx.analysis_scope);
  emit_if(rel::kHasDomain, ctx.domain);
  emit_opt(rel::kHasContentType, ctx.content_type);
  emit_if(rel::kHasFileFormat, ctx.file_format);
  for (const auto& s : ctx.org_standards) emit(rel::kHasStandard, s);
  for (const auto& p : ctx.org_policies) emit(rel::kHasPolicy, p);
  emit_opt(rel::kHasSecurityLevel, ctx.security_level);
  emit_opt(rel::kHasResourceBudget, ctx.est_resources);
  emit_opt(rel::kHasTimeBudget, ctx.est_time);
  for (const auto& a : ctx.attributes) {
    const std::string node = attribute_node(id, a.name);
    out.push_back({schema, std::string(rel::kHasAttribute), node, 1.0});
    out.push_back({node, std::string(rel::kHasType), std::string(to_string(a.type)), 1.0});
  }
  return out;
}

namespace detail {

// source name -> positions of its outgoing triples, in graph order
inline std::unordered_map<std::string_view, std::vector<std::size_t>>
outgoing_index(const TripleGraph& graph) {
  std::unordered_map<std::string_view, std::vector<std::size_t>> out;
  const auto& ts = graph.triples();
  for (std::size_t i = 0; i < ts.size(); ++i) out[ts[i].source].push_back(i);
  return out;
}

inline const std::vector<std::size_t>& edges_of(
    const std::unordered_map<std::string_view, std::vector<std::size_t>>& index,
    std::string_view node) {
  static const std::vector<std::size_t> kNone;
  auto it = index.find(node);
  return it == index.end() ? kNone : it->second;
}

[[noreturn]] inline void malformed(std::string_view id, const std::string& why) {
  fail(ErrorKind::kParse,
       "malformed subgraph for context '" + std::string(id) + "': " + why);
}

inline bool is_context_node(
    const TripleGraph& graph,
    const std::unordered_map<std::string_view, std::vector<std::size_t>>& index,
    std::string_view id) {
  for (auto i : edges_of(index, id))
    if (graph.triples()[i].relation == rel::kHasSchema) return true;
  return false;
}

// Attribute nodes of a context in schema order, paired with plain names.
inline std::vector<std::pair<std::string, std::string>> attribute_nodes(
    const TripleGraph& graph,
    const std::unordered_map<std::string_view, std::vector<std::size_t>>& index,
    std::string_view id) {
  const std::string schema = schema_node(id);
  const std::string prefix = std::string(id) + "_attr_";
  std::vector<std::pair<std::string, std::string>> out;
  for (auto i : edges_of(index, schema)) {
    const auto& t = graph.triples()[i];
    if (t.relation != rel::kHasAttribute) continue;
    if (t.target.size() <= prefix.size() || t.target.rfind(prefix, 0) != 0)
      malformed(id, "attribute node '" + t.target + "' is not namespaced by the context");
    out.emplace_back(t.target, t.target.substr(prefix.size()));
  }
  return out;
}

}  // namespace detail

/// All context node ids in graph order (subjects of a schema edge).
inline std::vector<std::string> context_ids(const TripleGraph& graph) {
  std::vector<std::string> out;
  for (const auto& t : graph.triples())
    if (t.relation == rel::kHasSchema) out.push_back(t.source);
  return out;
}

inline bool has_context(const TripleGraph& graph, std::string_view id) {
  for (const auto& t : graph.triples())
    if (t.source == id && t.relation == rel::kHasSchema) return true;
  return false;
}

/// Inverse of context_to_triples.
inline ContextDescriptor triples_to_context(const TripleGraph& graph,
                                            std::string_view context_id) {
  const auto index = detail::outgoing_index(graph);
  if (!detail::is_context_node(graph, index, context_id))
    fail(ErrorKind::kNotFound, "unknown context '" + std::string(context_id) + "'");

  ContextDescriptor ctx;
  ctx.context_id = std::string(context_id);
  bool saw_data_type = false;
  auto set_once = [&](std::string& field, const std::string& value,
                      std::string_view relation) {
    if (!field.empty())
      detail::malformed(context_id, "repeated " + std::string(relation));
    field = value;
  };
  auto set_opt = [&](std::optional<std::string>& field, const std::string& value,
                     std::string_view relation) {
    if (field) detail::malformed(context_id, "repeated " + std::string(relation));
    field = value;
  };
  for (auto i : detail::edges_of(index, context_id)) {
    const auto& t = graph.triples()[i];
    const std::string_view r = t.relation;
    if (r == rel::kHasDataType) {
      auto dt = parse_data_type(t.target);
      if (!dt || saw_data_type)
        detail::malformed(context_id, "bad or repeated data type '" + t.target + "'");
      ctx.data_type = *dt;
      saw_data_type = true;
    } else if (r == rel::kHasDataSource) {
      set_once(ctx.data_source, t.target, r);
    } else if (r == rel::kHasSizeBucket) {
      set_once(ctx.size_bucket, t.target, r);
    } else if (r == rel::kHasAnalysisScope) {
      set_opt(ctx.analysis_scope, t.target, r);
    } else if (r == rel::kHasDomain) {
      set_once(ctx.domain, t.target, r);
    } else if (r == rel::kHasContentType) {
      set_opt(ctx.content_type, t.target, r);
    } else if (r == rel::kHasFileFormat) {
      set_once(ctx.file_format, t.target, r);
    } else if (r == rel::kHasStandard) {
      ctx.org_standards.push_back(t.target);
    } else if (r == rel::kHasPolicy) {
      ctx.org_policies.push_back(t.target);
    } else if (r == rel::kHasSecurityLevel) {
      set_opt(ctx.security_level, t.target, r);
    } else if (r == rel::kHasResourceBudget) {
      set_opt(ctx.est_resources, t.target, r);
    } else if (r == rel::kHasTimeBudget) {
      set_opt(ctx.est_time, t.target, r);
    }
  }
  if (!saw_data_type) detail::malformed(context_id, "missing data type");

  for (auto& [node, name] : detail::attribute_nodes(graph, index, context_id)) {
    std::optional<AttributeType> type;
    for (auto i : detail::edges_of(index, node)) {
      const auto& t = graph.triples()[i];
      if (t.relation != rel::kHasType) continue;
      auto parsed = parse_attribute_type(t.target);
      if (!parsed || type)
        detail::malformed(context_id, "attribute '" + name + "' has a bad or repeated type");
      type = parsed;
    }
    if (!type) detail::malformed(context_id, "attribute '" + name + "' has no type");
    ctx.attributes.push_back({std::move(name), *type});
  }
  return ctx;
}

struct RuleEdge {
  std::string attribute;
  std::string rule;
  double weight = 1.0;
  std::optional<double> raw_score;

  friend bool operator==(const RuleEdge&, const RuleEdge&) = default;
};

struct DimensionEdge {
  std::string rule;
  std::string dimension;
  double weight = 1.0;
  std::optional<double> raw_score;

  friend bool operator==(const DimensionEdge&, const DimensionEdge&) = default;
};

/// Weighted attribute->rule and rule->dimension edges for one context.
/// Attributes are plain names, not namespaced nodes.
struct AssessmentPlan {
  std::string context_id;
  std::vector<RuleEdge> rule_edges;
  std::vector<DimensionEdge> dimension_edges;

  friend bool operator==(const AssessmentPlan&, const AssessmentPlan&) = default;

  bool empty() const { return rule_edges.empty() && dimension_edges.empty(); }

  /// Sorts edges by (attribute, rule) and (rule, dimension).
  void canonicalize() {
    std::sort(rule_edges.begin(), rule_edges.end(), [](const auto& a, const auto& b) {
      return std::tie(a.attribute, a.rule) < std::tie(b.attribute, b.rule);
    });
    std::sort(dimension_edges.begin(), dimension_edges.end(),
              [](const auto& a, const auto& b) {
                return std::tie(a.rule, a.dimension) < std::tie(b.rule, b.dimension);
              });
  }

  std::set<std::string> attributes() const {
    std::set<std::string> s;
    for (const auto& e : rule_edges) s.insert(e.attribute);
    return s;
  }
  std::set<std::string> rules() const {
    std::set<std::string> s;
    for (const auto& e : rule_edges) s.insert(e.rule);
    return s;
  }
  std::set<std::string> dimensions() const {
    std::set<std::string> s;
    for (const auto& e : dimension_edges) s.insert(e.dimension);
    return s;
  }
};

inline void validate(const AssessmentPlan& plan) {
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> rules;
  for (const auto& e : plan.rule_edges) {
    require(e.weight >= 0.0 && e.weight <= 1.0, "plan weight outside [0,1]");
    require(seen.emplace(e.attribute, e.rule).second,
            "duplicate rule edge (" + e.attribute + ", " + e.rule + ")");
    rules.insert(e.rule);
  }
  seen.clear();
  for (const auto& e : plan.dimension_edges) {
    require(e.weight >= 0.0 && e.weight <= 1.0, "plan weight outside [0,1]");
    require(rules.contains(e.rule),
            "dimension edge from rule '" + e.rule + "' that has no rule edge");
    require(seen.emplace(e.rule, e.dimension).second,
            "duplicate dimension edge (" + e.rule + ", " + e.dimension + ")");
  }
}

/// Collects the context's attribute->rule edges and the rule->dimension
/// edges reachable from those rules. Result is canonicalized.
inline AssessmentPlan extract_plan(const TripleGraph& graph,
                                   std::string_view context_id) {
  const auto index = detail::outgoing_index(graph);
  if (!detail::is_context_node(graph, index, context_id))
    fail(ErrorKind::kNotFound, "unknown context '" + std::string(context_id) + "'");
  AssessmentPlan plan;
  plan.context_id = std::string(context_id);
  std::vector<std::string> rules;
  std::unordered_set<std::string> rule_set;
  for (const auto& [node, name] : detail::attribute_nodes(graph, index, context_id)) {
    for (auto i : detail::edges_of(index, node)) {
      const auto& t = graph.triples()[i];
      if (t.relation != rel::kHasQualityRule) continue;
      plan.rule_edges.push_back({name, t.target, t.weight, std::nullopt});
      if (rule_set.insert(t.target).second) rules.push_back(t.target);
    }
  }
  for (const auto& r : rules) {
    for (auto i : detail::edges_of(index, r)) {
      const auto& t = graph.triples()[i];
      if (t.relation == rel::kContributesTo)
        plan.dimension_edges.push_back({r, t.target, t.weight, std::nullopt});
    }
  }
  plan.canonicalize();
  return plan;
}

/// Triples that attach `plan` to its context's attribute nodes.
inline std::vector<WeightedTriple> plan_to_triples(const AssessmentPlan& plan) {
  validate(plan);
  std::vector<WeightedTriple> out;
  for (const auto& e : plan.rule_edges)
    out.push_back({attribute_node(plan.context_id, e.attribute),
                   std::string(rel::kHasQualityRule), e.rule, e.weight});
  for (const auto& e : plan.dimension_edges)
    out.push_back({e.rule, std::string(rel::kContributesTo), e.dimension, e.weight});
  return out;
}

// JSON ------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const ContextDescriptor& c) {
  auto opt = [](const std::optional<std::string>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : c.attributes)
    attrs.push_back({{"name", a.name}, {"type", std::string(to_string(a.type))}});
  j = nlohmann::json{{"context_id", c.context_id},
                     {"data_type", std::string(to_string(c.data_type))},
                     {"attributes", attrs},
                     {"data_source", c.data_source},
                     {"size_bucket", c.size_bucket},
                     {"analysis_scope", opt(c.analysis_scope)},
                     {"domain", c.domain},
                     {"content_type", opt(c.content_type)},
                     {"file_format", c.file_format},
                     {"org_standards", c.org_standards},
                     {"org_policies", c.org_policies},
                     {"security_level", opt(c.security_level)},
                     {"est_resources", opt(c.est_resources)},
                     {"est_time", opt(c.est_time)}};
}

namespace detail {

inline const std::set<std::string>& descriptor_keys() {
  static const std::set<std::string> keys = {
      "context_id",     "data_type",    "attributes",     "data_source",
      "size_bucket",    "analysis_scope", "domain",       "content_type",
      "file_format",    "org_standards", "org_policies",  "security_level",
      "est_resources",  "est_time"};
  return keys;
}

inline std::string json_string(const nlohmann::json& j, const char* key,
                               bool required) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) fail(ErrorKind::kParse, std::string("missing field '") + key + "'");
    return {};
  }
  if (!j.at(key).is_string())
    fail(ErrorKind::kParse, std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

inline std::optional<std::string> json_opt_string(const nlohmann::json& j,
                                                  const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return json_string(j, key, true);
}

inline std::vector<std::string> json_string_list(const nlohmann::json& j,
                                                 const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key) || j.at(key).is_null()) return out;
  if (!j.at(key).is_array())
    fail(ErrorKind::kParse, std::string("field '") + key + "' must be an array");
  for (const auto& v : j.at(key)) {
    if (!v.is_string())
      fail(ErrorKind::kParse, std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Parses and validates a descriptor document; unknown keys are rejected.
/// With `require_attributes` false, an overlay-style document without
/// attributes is accepted.
inline ContextDescriptor descriptor_from_json(const nlohmann::json& j,
                                              bool require_attributes = true) {
  if (!j.is_object()) fail(ErrorKind::kParse, "context descriptor must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!detail::descriptor_keys().contains(key))
      fail(ErrorKind::kParse, "unknown descriptor field '" + key + "'");
  ContextDescriptor c;
  c.context_id = detail::json_string(j, "context_id", true);
  const std::string dt = detail::json_string(j, "data_type", false);
  if (!dt.empty()) {
    auto parsed = parse_data_type(dt);
    if (!parsed) fail(ErrorKind::kParse, "unknown data_type '" + dt + "'");
    c.data_type = *parsed;
  }
  if (j.contains("attributes") && !j.at("attributes").is_null()) {
    if (!j.at("attributes").is_array())
      fail(ErrorKind::kParse, "field 'attributes' must be an array");
    for (const auto& a : j.at("attributes")) {
      if (!a.is_object()) fail(ErrorKind::kParse, "attribute entries must be objects");
      const std::string type = detail::json_string(a, "type", true);
      auto parsed = parse_attribute_type(type);
      if (!parsed) fail(ErrorKind::kParse, "unknown attribute type '" + type + "'");
      c.attributes.push_back({detail::json_string(a, "name", true), *parsed});
    }
  }
  c.data_source = detail::json_string(j, "data_source", false);
  c.size_bucket = detail::json_string(j, "size_bucket", false);
  c.analysis_scope = detail::json_opt_string(j, "analysis_scope");
  c.domain = detail::json_string(j, "domain", false);
  c.content_type = detail::json_opt_string(j, "content_type");
  c.file_format = detail::json_string(j, "file_format", false);
  c.org_standards = detail::json_string_list(j, "org_standards");
  c.org_policies = detail::json_string_list(j, "org_policies");
  c.security_level = detail::json_opt_string(j, "security_level");
  c.est_resources = detail::json_opt_string(j, "est_resources");
  c.est_time = detail::json_opt_string(j, "est_time");
  if (require_attributes) {
    try {
      validate(c);
    } catch (const Error& e) {
      fail(ErrorKind::kParse, e.what());
    }
  }
  return c;
}

inline void from_json(const nlohmann::json& j, ContextDescriptor& c) {
  c = descriptor_from_json(j);
}

inline void to_json(nlohmann::json& j, const AssessmentPlan& p) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& e : p.rule_edges) {
    nlohmann::json r = {{"attribute", e.attribute}, {"rule", e.rule}, {"weight", e.weight}};
    if (e.raw_score) r["raw_score"] = *e.raw_score;
    rules.push_back(std::move(r));
  }
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& e : p.dimension_edges) {
    nlohmann::json d = {{"rule", e.rule}, {"dimension", e.dimension}, {"weight", e.weight}};
    if (e.raw_score) d["raw_score"] = *e.raw_score;
    dims.push_back(std::move(d));
  }
  j = nlohmann::json{{"context_id", p.context_id},
                     {"rule_edges", rules},
                     {"dimension_edges", dims}};
}

inline void from_json(const nlohmann::json& j, AssessmentPlan& p) {
  if (!j.is_object()) fail(ErrorKind::kParse, "plan must be a JSON object");
  p = AssessmentPlan{};
  p.context_id = detail::json_string(j, "context_id", true);
  auto number = [](const nlohmann::json& o, const char* key) -> std::optional<double> {
    if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
    if (!o.at(key).is_number())
      fail(ErrorKind::kParse, std::string("field '") + key + "' must be a number");
    return o.at(key).get<double>();
  };
  for (const auto& e : j.value("rule_edges", nlohmann::json::array())) {
    auto w = number(e, "weight");
    if (!w) fail(ErrorKind::kParse, "rule edge without weight");
    p.rule_edges.push_back({detail::json_string(e, "attribute", true),
                            detail::json_string(e, "rule", true), *w,
                            number(e, "raw_score")});
  }
  for (const auto& e : j.value("dimension_edges", nlohmann::json::array())) {
    auto w = number(e, "weight");
    if (!w) fail(ErrorKind::kParse, "dimension edge without weight");
    p.dimension_edges.push_back({detail::json_string(e, "rule", true),
                                 detail::json_string(e, "dimension", true), *w,
                                 number(e, "raw_score")});
  }
  try {
    validate(p);
  } catch (const Error& e) {
    fail(ErrorKind::kParse, e.what());
  }
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace qakge
