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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qakge/qakge.hpp"
#include "support.hpp"

namespace {

using namespace qakge;
namespace t = qakge::testing;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome gradient_correctness() {
  std::size_t accepted = 0;
  double worst = 0.0;
  for (double beta : {0.0, 0.3, 1.0}) {
    std::size_t here = 0;
    for (std::uint64_t seed = 0; seed < 60 && here < 8; ++seed) {
      const auto g = t::random_graph(8 + seed % 13, 1 + seed % 3, 6 + seed % 10, seed);
      const auto m = init_model(g.vocab(), 1 + seed % 8, seed + 1000);
      Rng rng(seed);
      const auto& pos = g.indexed();
      const auto neg =
          sample_corruptions(pos, 1 + seed % 4, CorruptionMode::kAll, m.num_entities(), rng);
      const ObjectiveSettings s{1.0, beta, 4, 1e-2, 1};
      const auto r = t::check_gradient(m, pos, neg.negatives, s, 1e-6);
      if (!r.accepted || r.components == 0) continue;
      ++here;
      worst = std::max(worst, r.max_rel_error);
    }
    accepted += here;
  }
  return {accepted >= 20 && worst < 1e-4,
          std::to_string(accepted) + " instances, max relative error " + fmt(worst)};
}

Outcome ranking_oracle() {
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n_ent = 10 + seed * 3;  // <= 43
    const auto g = t::random_graph(n_ent, 2 + seed % 3, 40 + seed * 13, seed);  // <= 183
    const auto split = split_train_test(g, 0.3, seed);
    // Integer embeddings force ties; real ones exercise the strict ordering.
    const auto m = seed % 2 ? t::integer_model(split.train.vocab(), 3, seed)
                            : init_model(split.train.vocab(), 6, seed);
    const auto known = known_positives(m.vocab, {&split.train, &split.test});
    for (auto protocol : {Protocol::kRaw, Protocol::kFiltered}) {
      EvalOptions opts;
      opts.protocol = protocol;
      const auto metrics = evaluate(m, split.test, known, opts);
      const auto idx = split.test.indexed_against(m.vocab);
      std::vector<std::size_t> flat;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto s = t::oracle_rank(m, idx[i], Side::kSubject, known, protocol);
        const auto o = t::oracle_rank(m, idx[i], Side::kObject, known, protocol);
        mismatches += (s != metrics.ranks[i].subject) + (o != metrics.ranks[i].object);
        compared += 2;
        flat.push_back(s);
        flat.push_back(o);
      }
      EvalMetrics oracle;
      summarize_ranks(flat, opts.hits_at, oracle);
      mismatches += oracle.mrr != metrics.mrr || oracle.mr != metrics.mr ||
                    oracle.hits != metrics.hits;
    }
  }
  return {mismatches == 0 && compared > 0,
          std::to_string(compared) + " ranks compared, " + std::to_string(mismatches) +
              " mismatches"};
}

Outcome memorization() {
  // Unit weights: every triple is a certain fact.
  std::vector<WeightedTriple> unit;
  for (auto tr : t::random_graph(20, 3, 50, 1).triples()) {
    tr.weight = 1.0;
    unit.push_back(tr);
  }
  const TripleGraph g(std::move(unit));
  Hyperparams hp;
  hp.k = 16;
  hp.learning_rate = 1e-3;
  hp.eta = 5;
  hp.margin = 0.5;
  hp.epochs = 1000;
  hp.seed = 1;
  const auto r = train(g, hp);
  const auto known = known_positives(r.model.vocab, {&g});
  const auto m = evaluate(r.model, g, known);
  return {m.hits.at(1) >= 0.9, "train Hits@1 " + fmt(m.hits.at(1))};
}

Hyperparams table_hyperparams(double lr) {
  Hyperparams hp;
  hp.k = 50;
  hp.eta = 5;
  hp.batch_size = 64;
  hp.learning_rate = lr;
  hp.margin = 0.5;
  hp.epochs = 5000;
  hp.corruption_mode = CorruptionMode::kAll;
  hp.reg_p = 4;
  hp.seed = 7;
  return hp;
}

struct BandRun {
  EvalMetrics metrics;
  double seconds = 0.0;
};

BandRun band_run(const TrainTestSplit& split, const Hyperparams& hp) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = train(split.train, hp);
  const auto known = known_positives(r.model.vocab, {&split.train, &split.test});
  BandRun out;
  out.metrics = evaluate(r.model, split.test, known);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Outcome full_scale_band() {
  GeneratorConfig cfg;
  cfg.n_contexts = 41;
  cfg.seed = 7;
  const auto g = generate_synthetic_graph(cfg);
  const std::size_t n = g.graph.size();
  const bool size_ok = n >= 4500 && n <= 7000;
  const auto split = split_train_test(g.graph, 0.2, 7);
  const auto run = band_run(split, table_hyperparams(1e-4));
  const auto& m = run.metrics;
  const bool ok = size_ok && m.hits.at(10) >= 0.45 && m.mrr >= 0.10 && run.seconds <= 1800.0;
  return {ok, std::to_string(n) + " triples, Hits@10 " + fmt(m.hits.at(10)) + ", MRR " +
                  fmt(m.mrr) + ", MR " + fmt(m.mr) + ", Hits@3 " + fmt(m.hits.at(3)) +
                  ", Hits@1 " + fmt(m.hits.at(1)) + ", training+eval " +
                  fmt(run.seconds, 3) + " s"};
}

Outcome focuse_properties() {
  std::vector<std::string> failures;
  // Non-negative modulated scores over a sweep of scores, weights and betas.
  bool non_negative = true;
  for (double f = -50.0; f <= 50.0; f += 0.37)
    for (double w : {0.0, 0.1, 0.5, 0.9, 1.0})
      for (double beta : {0.0, 0.3, 0.7, 1.0})
        for (bool positive : {true, false})
          non_negative = non_negative && focuse_modulate(f, w, beta, positive) >= 0.0;
  if (!non_negative) failures.push_back("negative modulated score");
  // Full structural influence: constant re-weighting leaves training unchanged.
  {
    const auto g = t::random_graph(25, 3, 60, 3);
    Hyperparams hp;
    hp.k = 8;
    hp.eta = 3;
    hp.batch_size = 16;
    hp.learning_rate = 1e-3;
    hp.epochs = 30;
    hp.seed = 5;
    hp.fixed_beta = 1.0;
    const auto a = train(g, hp);
    for (double w : {0.0, 0.3, 1.0}) {
      std::vector<WeightedTriple> flat(g.triples().begin(), g.triples().end());
      for (auto& tr : flat) tr.weight = w;
      const auto b = train(TripleGraph(flat), hp);
      if (!(a.model == b.model) || a.report.epoch_loss != b.report.epoch_loss)
        failures.push_back("re-weighting changed the beta=1 trajectory");
    }
  }
  // No structural influence: a zero-weight positive carries no signal.
  {
    const TripleGraph g({{"a", "r", "b", 0.0}, {"c", "r", "d", 1.0}});
    const auto m = init_model(g.vocab(), 4, 9);
    const auto a = *g.vocab().find_entity("a");
    const auto b = *g.vocab().find_entity("b");
    const auto c = *g.vocab().find_entity("c");
    const auto d = *g.vocab().find_entity("d");
    const auto r = *g.vocab().find_relation("r");
    const std::vector<IndexedTriple> pos = {{a, r, b, 0.0}};
    const std::vector<IndexedTriple> neg = {{c, r, d, 0.0}};
    const ObjectiveSettings s{0.5, 0.0, 4, 0.0, 1};
    for (double f : {-3.0, 0.0, 2.5})
      if (focuse_modulate(f, 0.0, 0.0, true) != 0.0)
        failures.push_back("zero-weight positive has a nonzero modulated score");
    const auto grad = gradient_of_loss(m, pos, neg, s);
    for (auto e : {a, b})
      for (std::size_t j = 0; j < m.k; ++j)
        if (grad.gradient.ent_re.row(e)[j] != 0.0 || grad.gradient.ent_im.row(e)[j] != 0.0)
          failures.push_back("zero-weight positive received a gradient");
  }
  std::string detail = failures.empty() ? "all properties hold" : failures.front();
  return {failures.empty(), detail};
}

Outcome plan_completeness() {
  const auto g = t::radiation_scenario_graph();
  const auto query = t::query_radiation_context();

  PlannerConfig pc;
  pc.hp = table_hyperparams(1e-4);
  pc.hp.epochs = 300;
  const auto kge = generate_plan(g.graph, query, pc);

  const auto merged = g.graph.merged_with(context_to_triples(query));
  Node2VecConfig n2v;
  n2v.seed = 7;
  const auto base = baseline_plan(merged, query.context_id, n2v, 0.7);

  const auto cmp = compare_plans(kge.plan, base.plan, query);
  const bool ok = cmp.a.covered == 5 && cmp.a.total == 5 && cmp.b.covered == 3 &&
                  cmp.b.total == 5 && base.matched_context == "radiation_station_archive";
  return {ok, "KGE plan " + std::to_string(cmp.a.covered) + "/" + std::to_string(cmp.a.total) +
                  " (" + std::to_string(cmp.a.rules) + " rules, " +
                  std::to_string(cmp.a.dimensions) + " dimensions), baseline " +
                  std::to_string(cmp.b.covered) + "/" + std::to_string(cmp.b.total) +
                  " from " + base.matched_context + " at cosine " + fmt(base.cosine)};
}

Outcome self_retrieval() {
  const auto g = t::radiation_scenario_graph();
  auto dup = t::stored_radiation_context();
  dup.context_id = "radiation_station_copy";
  const auto merged = g.graph.merged_with(context_to_triples(dup));
  Node2VecConfig n2v;
  n2v.seed = 3;
  const auto r = baseline_plan(merged, dup.context_id, n2v, 0.7);
  const auto stored = extract_plan(merged, "radiation_station_archive");
  const bool ok = r.matched_context == "radiation_station_archive" &&
                  r.plan.rule_edges == stored.rule_edges &&
                  r.plan.dimension_edges == stored.dimension_edges &&
                  r.plan.context_id == dup.context_id;
  return {ok, "matched " + r.matched_context + " at cosine " + fmt(r.cosine) + ", " +
                  std::to_string(r.plan.rule_edges.size()) + " rule edges"};
}

Outcome determinism_and_round_trips() {
  std::vector<std::string> failures;
  t::TempDir dir;
  GeneratorConfig gc;
  gc.n_contexts = 6;
  gc.attrs_per_context = {3, 6};
  gc.seed = 5;
  const auto g = generate_synthetic_graph(gc);

  Hyperparams hp;
  hp.k = 8;
  hp.epochs = 20;
  hp.learning_rate = 1e-3;
  hp.seed = 3;
  const auto a = train(g.graph, hp);
  const auto b = train(g.graph, hp);
  if (serialize_checkpoint(a.model) != serialize_checkpoint(b.model))
    failures.push_back("checkpoints differ across runs");

  PlannerConfig pc;
  pc.hp = hp;
  const auto query = t::query_radiation_context();
  const auto p1 = generate_plan(g.graph, query, pc);
  const auto p2 = generate_plan(g.graph, query, pc);
  if (plan_document(p1.plan, p1.meta) != plan_document(p2.plan, p2.meta))
    failures.push_back("plans differ across runs");

  save_triples_csv(g.graph, dir / "g.csv");
  const auto back = load_triples_csv(dir / "g.csv");
  if (!(back.triples() == g.graph.triples())) failures.push_back("CSV round trip changed triples");

  save_checkpoint(a.model, dir / "m.bin");
  if (!(load_checkpoint(dir / "m.bin") == a.model))
    failures.push_back("checkpoint round trip changed the model");

  for (const auto& ctx : g.contexts) {
    const TripleGraph only(context_to_triples(ctx));
    if (!(triples_to_context(only, ctx.context_id) == ctx))
      failures.push_back("descriptor round trip changed " + ctx.context_id);
  }
  const TripleGraph q(context_to_triples(query));
  if (!(triples_to_context(q, query.context_id) == query))
    failures.push_back("descriptor round trip changed the radiation context");

  return {failures.empty(), failures.empty() ? "checkpoints, plans and round trips identical"
                                             : failures.front()};
}

Outcome metric_arithmetic() {
  const std::vector<int> at = {1, 3, 10};
  EvalMetrics m1, m2;
  const std::vector<std::size_t> r1 = {1, 2, 4};
  const std::vector<std::size_t> r2 = {1, 5, 12};
  summarize_ranks(r1, at, m1);
  summarize_ranks(r2, at, m2);
  const bool ok = std::abs(m1.mrr - 0.58333333333333333) <= 1e-12 &&
                  std::abs(m1.mr - 7.0 / 3.0) <= 1e-12 && m1.hits.at(1) == 1.0 / 3.0 &&
                  m1.hits.at(3) == 2.0 / 3.0 && m1.hits.at(10) == 1.0 &&
                  m2.hits.at(10) == 2.0 / 3.0 && m2.hits.at(3) == 1.0 / 3.0 &&
                  m2.hits.at(1) == 1.0 / 3.0 && m2.mr == 6.0 &&
                  std::abs(m2.mrr - (1.0 + 0.2 + 1.0 / 12.0) / 3.0) <= 1e-12 &&
                  rank_from_counts(0, 3) == 3 && rank_from_counts(2, 0) == 3;
  return {ok, "[1,2,4] -> MRR " + fmt(m1.mrr, 15) + ", MR " + fmt(m1.mr, 15)};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number; none runs all.
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", 10, gradient_correctness},
      {2, "ranking oracle equivalence", 10, ranking_oracle},
      {3, "memorization capacity", 60, memorization},
      {4, "full-scale band", 1800, full_scale_band},
      {5, "FocusE properties", 10, focuse_properties},
      {6, "plan completeness", 600, plan_completeness},
      {7, "baseline self-retrieval", 60, self_retrieval},
      {8, "determinism and round trips", 60, determinism_and_round_trips},
      {9, "metric arithmetic", 1, metric_arithmetic},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s [%d] %s: %s (%.2f s of %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.budget_seconds,
                in_time ? "" : " over time budget");
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
