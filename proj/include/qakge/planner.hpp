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
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qakge/common.hpp"
#include "qakge/context_model.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/kge_train.hpp"
#include "qakge/synth_graph.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

struct PredictedEdge {
  std::string source;
  std::string relation;
  std::string target;
  double raw_score = 0.0;
  double calibrated_weight = 0.0;
};

struct ScoreRange {
  double min = 0.0;
  double max = 0.0;
};

/// Per-relation score range over observed edges.
struct CalibrationStats {
  std::map<std::string, ScoreRange> ranges;
  /// Relations of the model without observed edges in the graph.
  std::vector<std::string> excluded;

  const ScoreRange& at(const std::string& relation) const {
    auto it = ranges.find(relation);
    if (it == ranges.end())
      fail(ErrorKind::kNotFound, "no calibration stats for relation '" + relation + "'");
    return it->second;
  }
};

inline CalibrationStats fit_calibration(const ModelParams& m, const TripleGraph& graph) {
  CalibrationStats stats;
  std::map<std::uint32_t, ScoreRange> by_rel;
  for (const auto& t : graph.triples()) {
    auto s = m.vocab.find_entity(t.source);
    auto p = m.vocab.find_relation(t.relation);
    auto o = m.vocab.find_entity(t.target);
    if (!s || !p || !o) continue;
    const double f = complex_score_unchecked(m, *s, *p, *o);
    auto [it, inserted] = by_rel.emplace(*p, ScoreRange{f, f});
    if (!inserted) {
      it->second.min = std::min(it->second.min, f);
      it->second.max = std::max(it->second.max, f);
    }
  }
  for (std::uint32_t r = 0; r < m.vocab.num_relations(); ++r) {
    auto it = by_rel.find(r);
    if (it == by_rel.end()) {
      stats.excluded.push_back(m.vocab.relation(r));
    } else {
      stats.ranges.emplace(m.vocab.relation(r), it->second);
    }
  }
  return stats;
}

/// Min-max maps a raw score into [0,1]; a degenerate range maps to 0.5.
inline double calibrate_weight(double raw_score, const ScoreRange& range) {
  if (range.max == range.min) return 0.5;
  return std::clamp((raw_score - range.min) / (range.max - range.min), 0.0, 1.0);
}

/// Scores (source, relation, c) for each c in `pool` and keeps those whose
/// calibrated weight reaches `tau`; if none does, keeps the `top_m` best.
/// Output is sorted by descending raw score (pool order on ties).
inline std::vector<PredictedEdge> predict_targets(const ModelParams& m,
                                                  const CalibrationStats& stats,
                                                  const std::string& source,
                                                  const std::string& relation,
                                                  const std::vector<std::string>& pool,
                                                  std::size_t top_m, double tau) {
  if (pool.empty()) fail(ErrorKind::kInvalidArgument, "empty candidate pool for " + relation);
  require(top_m >= 1, "top_m must be at least 1");
  const auto& range = stats.at(relation);
  const auto s = m.vocab.entity_index(source);
  const auto p = m.vocab.relation_index(relation);
  std::vector<PredictedEdge> scored;
  scored.reserve(pool.size());
  for (const auto& c : pool) {
    const double f = complex_score_unchecked(m, s, p, m.vocab.entity_index(c));
    scored.push_back({source, relation, c, f, calibrate_weight(f, range)});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.raw_score > b.raw_score; });
  std::vector<PredictedEdge> kept;
  for (const auto& e : scored)
    if (e.calibrated_weight >= tau) kept.push_back(e);
  if (kept.empty())
    kept.assign(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(
                                                     std::min(top_m, scored.size())));
  return kept;
}

inline std::vector<PredictedEdge> predict_rules_for_attribute(
    const ModelParams& m, const CalibrationStats& stats, const std::string& attribute_node,
    const std::vector<std::string>& rule_pool, std::size_t top_m, double tau) {
  return predict_targets(m, stats, attribute_node, std::string(rel::kHasQualityRule),
                         rule_pool, top_m, tau);
}

inline std::vector<PredictedEdge> predict_dimensions_for_rule(
    const ModelParams& m, const CalibrationStats& stats, const std::string& rule_node,
    const std::vector<std::string>& dimension_pool, std::size_t top_m, double tau) {
  return predict_targets(m, stats, rule_node, std::string(rel::kContributesTo),
                         dimension_pool, top_m, tau);
}

/// Sorted candidate pool: targets of `relation` edges plus nodes typed as
/// `inventory_class`.
inline std::vector<std::string> candidate_pool(const TripleGraph& graph,
                                               std::string_view relation,
                                               std::string_view inventory_class) {
  std::set<std::string> pool;
  for (const auto& t : graph.triples()) {
    if (t.relation == relation) pool.insert(t.target);
    if (t.relation == rel::kIsA && t.target == inventory_class) pool.insert(t.source);
  }
  return {pool.begin(), pool.end()};
}

struct PlannerConfig {
  Hyperparams hp;
  double tau = 0.5;
  std::size_t top_m = 3;
  /// Optional model whose rows initialize matching names.
  const ModelParams* warm_start = nullptr;
};

struct ModelMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::size_t k = 0;
};

struct PlanResult {
  AssessmentPlan plan;
  std::vector<PredictedEdge> provenance;
  TrainReport report;
  ModelMeta meta;
};

/// Adds the new context to the graph, trains a fresh model, then predicts
/// rules for every attribute and dimensions for every selected rule, with
/// calibrated weights. Every attribute receives at least one rule.
inline PlanResult generate_plan(const TripleGraph& graph, const ContextDescriptor& ctx,
                                const PlannerConfig& cfg) {
  validate(ctx);
  require(cfg.top_m >= 1, "top_m must be at least 1");
  if (ctx.attributes.empty())
    fail(ErrorKind::kInvalidArgument, "context '" + ctx.context_id + "' has no attributes");
  const auto ctx_triples = context_to_triples(ctx);
  for (const auto& t : ctx_triples) {
    if (graph.vocab().find_entity(t.source) &&
        (t.source == ctx.context_id || t.source.rfind(ctx.context_id + "_", 0) == 0))
      fail(ErrorKind::kInvalidArgument,
           "context id collision: '" + t.source + "' already exists in the graph");
  }

  const TripleGraph merged = graph.merged_with(ctx_triples);
  const auto rule_pool = candidate_pool(merged, rel::kHasQualityRule, kMeasureClass);
  const auto dim_pool = candidate_pool(merged, rel::kContributesTo, kDimensionClass);
  if (rule_pool.empty()) fail(ErrorKind::kInvalidArgument, "graph holds no quality rules");
  if (dim_pool.empty()) fail(ErrorKind::kInvalidArgument, "graph holds no quality dimensions");

  auto trained = train(merged, cfg.hp, cfg.warm_start);
  const auto stats = fit_calibration(trained.model, merged);

  PlanResult out;
  out.plan.context_id = ctx.context_id;
  out.meta = {cfg.hp.seed, cfg.hp.epochs, cfg.hp.k};
  std::set<std::string> selected;
  for (const auto& a : ctx.attributes) {
    const auto node = attribute_node(ctx.context_id, a.name);
    for (const auto& e : predict_rules_for_attribute(trained.model, stats, node, rule_pool,
                                                     cfg.top_m, cfg.tau)) {
      out.plan.rule_edges.push_back({a.name, e.target, e.calibrated_weight, e.raw_score});
      selected.insert(e.target);
      out.provenance.push_back(e);
    }
  }
  for (const auto& r : selected) {
    for (const auto& e : predict_dimensions_for_rule(trained.model, stats, r, dim_pool,
                                                     cfg.top_m, cfg.tau)) {
      out.plan.dimension_edges.push_back({r, e.target, e.calibrated_weight, e.raw_score});
      out.provenance.push_back(e);
    }
  }
  out.plan.canonicalize();
  out.report = std::move(trained.report);
  return out;
}

struct PlanCoverage {
  std::size_t covered = 0;
  std::size_t total = 0;
  std::size_t rules = 0;
  std::size_t dimensions = 0;
  std::vector<std::string> uncovered;

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
  }
};

struct PlanComparison {
  PlanCoverage a;
  PlanCoverage b;
};

inline PlanCoverage plan_coverage(const AssessmentPlan& plan, const ContextDescriptor& ctx) {
  PlanCoverage c;
  c.total = ctx.attributes.size();
  const auto covered = plan.attributes();
  for (const auto& a : ctx.attributes) {
    if (covered.contains(a.name)) {
      ++c.covered;
    } else {
      c.uncovered.push_back(a.name);
    }
  }
  c.rules = plan.rules().size();
  c.dimensions = plan.dimensions().size();
  return c;
}

/// Attribute coverage, rule and dimension counts of two plans for the same
/// context.
inline PlanComparison compare_plans(const AssessmentPlan& plan_a, const AssessmentPlan& plan_b,
                                    const ContextDescriptor& ctx) {
  if (plan_a.context_id != ctx.context_id || plan_b.context_id != ctx.context_id)
    fail(ErrorKind::kInvalidArgument, "plans do not both belong to context '" +
                                          ctx.context_id + "'");
  return {plan_coverage(plan_a, ctx), plan_coverage(plan_b, ctx)};
}

inline nlohmann::json plan_document(const AssessmentPlan& plan, const ModelMeta& meta) {
  nlohmann::json j = plan;
  j["model_meta"] = {{"seed", meta.seed}, {"epochs", meta.epochs}, {"k", meta.k}};
  return j;
}

inline nlohmann::json comparison_to_json(const PlanComparison& c) {
  auto one = [](const PlanCoverage& p) {
    return nlohmann::json{{"covered", p.covered},   {"total", p.total},
                          {"coverage", p.fraction()}, {"rules", p.rules},
                          {"dimensions", p.dimensions}, {"uncovered", p.uncovered}};
  };
  return {{"plan_a", one(c.a)}, {"plan_b", one(c.b)}};
}

/// Human-readable coverage listing, one line per attribute.
inline std::string coverage_report(const AssessmentPlan& plan, const ContextDescriptor& ctx) {
  std::string out = "Assessment plan for " + ctx.context_id + "\n";
  for (const auto& a : ctx.attributes) {
    out += "  " + a.name + " (" + std::string(to_string(a.type)) + "):";
    bool any = false;
    for (const auto& e : plan.rule_edges) {
      if (e.attribute != a.name) continue;
      out += " " + e.rule + "=" + format_double(std::round(e.weight * 1000.0) / 1000.0);
      any = true;
    }
    out += any ? "\n" : " (uncovered)\n";
  }
  const auto cov = plan_coverage(plan, ctx);
  out += "  coverage " + std::to_string(cov.covered) + "/" + std::to_string(cov.total) +
         ", " + std::to_string(cov.rules) + " rules, " + std::to_string(cov.dimensions) +
         " dimensions\n";
  return out;
}

}  // namespace qakge
