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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qakge/checkpoint.hpp"
#include "qakge/config.hpp"
#include "qakge/context_model.hpp"
#include "qakge/eval.hpp"
#include "qakge/grid_search.hpp"
#include "qakge/kge_train.hpp"
#include "qakge/node2vec.hpp"
#include "qakge/planner.hpp"
#include "qakge/profiler.hpp"
#include "qakge/synth_graph.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Bad input (flags, files, schemas) exits 1; failures after inputs were
/// accepted exit 2.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kParse:
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
      return kExitValidation;
    case ErrorKind::kNotFound:
    case ErrorKind::kNumeric:
      return kExitRuntime;
  }
  return kExitRuntime;
}

namespace detail {

struct CliState {
  std::string graph, config, out, ground_truth_out, report_out, data, overlay, model,
      context, json_out, plan_a, plan_b, grid, leaderboard_out, warm_start;
  std::optional<std::uint64_t> seed;
  std::optional<int> contexts;
  std::optional<double> test_fraction;
  std::optional<double> threshold;
  std::optional<std::size_t> budget_epochs;
  std::string protocol = "filtered";
  char delimiter = ',';
};

inline std::filesystem::path canonical_or_self(const std::string& p) {
  std::error_code ec;
  auto c = std::filesystem::weakly_canonical(p, ec);
  return ec ? std::filesystem::path(p) : c;
}

/// Outputs never overwrite inputs.
inline void guard_outputs(const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs) {
  for (const auto& o : outputs) {
    if (o.empty()) continue;
    for (const auto& i : inputs)
      if (!i.empty() && canonical_or_self(i) == canonical_or_self(o))
        fail(ErrorKind::kInvalidArgument, "output " + o + " would overwrite input " + i);
  }
}

inline RunConfig config_with_overrides(const CliState& st) {
  RunConfig cfg = st.config.empty() ? RunConfig{} : load_run_config(st.config);
  if (st.seed) {
    cfg.seed = st.seed;
    cfg.hp.seed = *st.seed;
    cfg.generator.seed = *st.seed;
    cfg.baseline.n2v.seed = *st.seed;
  }
  if (st.contexts) cfg.generator.n_contexts = *st.contexts;
  if (st.test_fraction) cfg.test_fraction = *st.test_fraction;
  if (st.threshold) cfg.baseline.threshold = *st.threshold;
  validate(cfg);
  return cfg;
}

inline ContextDescriptor load_descriptor(const std::string& path) {
  return descriptor_from_json(read_json_file(path), /*require_attributes=*/true);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::kIo, "write failed for " + path);
}

inline int cmd_synth(const CliState& st, std::ostream& out) {
  guard_outputs({st.config}, {st.out, st.ground_truth_out});
  const auto cfg = config_with_overrides(st);
  const auto g = generate_synthetic_graph(cfg.generator);
  save_triples_csv(g.graph, st.out);
  if (!st.ground_truth_out.empty()) {
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& p : g.ground_truth) plans.push_back(p);
    write_json_file(st.ground_truth_out, plans);
  }
  out << "contexts " << g.contexts.size() << ", triples " << g.graph.size() << ", entities "
      << g.graph.vocab().num_entities() << ", relations " << g.graph.vocab().num_relations()
      << "\n";
  return kExitOk;
}

inline int cmd_profile(const CliState& st, std::ostream& out) {
  guard_outputs({st.data, st.overlay}, {st.out});
  const auto overlay = overlay_from_json(read_json_file(st.overlay));
  ProfileOptions opts;
  opts.delimiter = st.delimiter;
  const auto p = profile_dataset(st.data, overlay, opts);
  write_json_file(st.out, p.descriptor);
  out << p.descriptor.context_id << ": " << p.descriptor.attributes.size() << " attributes, "
      << p.rows << " rows\n";
  for (const auto& c : p.empty_columns) out << "warning: column '" << c << "' is empty\n";
  return kExitOk;
}

inline int cmd_train(const CliState& st, std::ostream& out) {
  guard_outputs({st.graph, st.config}, {st.out, st.report_out});
  const auto cfg = config_with_overrides(st);
  const auto graph = load_triples_csv(st.graph);
  const auto split = split_train_test(graph, cfg.test_fraction, cfg.hp.seed);
  const auto result = train(split.train, cfg.hp);
  save_checkpoint(result.model, st.out);
  if (!st.report_out.empty()) {
    write_json_file(st.report_out,
                    {{"epoch_loss", result.report.epoch_loss},
                     {"final_beta", result.report.final_beta},
                     {"seed", result.report.seed},
                     {"self_collisions_kept", result.report.self_collisions_kept},
                     {"n_train", split.train.size()},
                     {"n_test", split.test.size()},
                     {"initial_test_size", split.initial_test_size},
                     {"hyperparams", hyperparams_to_json(cfg.hp)}});
  }
  out << "trained on " << split.train.size() << " triples in " << result.report.wall_seconds
      << " s, final loss " << format_double(result.report.epoch_loss.back()) << "\n";
  return kExitOk;
}

inline int cmd_eval(const CliState& st, std::ostream& out) {
  guard_outputs({st.graph, st.model, st.config}, {st.json_out});
  const auto cfg = config_with_overrides(st);
  const auto protocol = parse_protocol(st.protocol);
  if (!protocol) fail(ErrorKind::kInvalidArgument, "--protocol must be raw or filtered");
  const auto model = load_checkpoint(st.model);
  const auto graph = load_triples_csv(st.graph);
  const auto split = split_train_test(graph, cfg.test_fraction, cfg.hp.seed);
  check_vocab_compatible(model, split.train.vocab());
  EvalOptions opts;
  opts.protocol = *protocol;
  opts.loss_hp = cfg.hp;
  const auto metrics =
      evaluate(model, split.test, known_positives(model.vocab, {&split.train, &split.test}), opts);
  auto j = metrics_to_json(metrics);
  j["initial_test_size"] = split.initial_test_size;
  if (!st.json_out.empty()) write_json_file(st.json_out, j);
  out << j.dump(2) << "\n";
  return kExitOk;
}

inline int cmd_plan(const CliState& st, std::ostream& out) {
  guard_outputs({st.graph, st.context, st.config, st.warm_start}, {st.out, st.report_out});
  const auto cfg = config_with_overrides(st);
  const auto graph = load_triples_csv(st.graph);
  const auto ctx = load_descriptor(st.context);
  std::optional<ModelParams> warm;
  if (!st.warm_start.empty()) warm = load_checkpoint(st.warm_start);
  PlannerConfig pc;
  pc.hp = cfg.hp;
  pc.tau = cfg.planner.tau;
  pc.top_m = cfg.planner.top_m;
  pc.warm_start = warm ? &*warm : nullptr;
  const auto result = generate_plan(graph, ctx, pc);
  write_json_file(st.out, plan_document(result.plan, result.meta));
  const auto report = coverage_report(result.plan, ctx);
  if (!st.report_out.empty()) write_text(st.report_out, report);
  out << report;
  return kExitOk;
}

inline int cmd_baseline(const CliState& st, std::ostream& out) {
  guard_outputs({st.graph, st.context, st.config}, {st.out});
  const auto cfg = config_with_overrides(st);
  auto graph = load_triples_csv(st.graph);
  const auto ctx = load_descriptor(st.context);
  validate(ctx);
  const auto triples = context_to_triples(ctx);
  if (has_context(graph, ctx.context_id)) {
    for (const auto& t : triples)
      if (!graph.contains(t.source, t.relation, t.target))
        fail(ErrorKind::kInvalidArgument, "context id collision: '" + ctx.context_id +
                                              "' exists in the graph with a different description");
  } else {
    graph = graph.merged_with(triples);
  }
  const auto result =
      baseline_plan(graph, ctx.context_id, cfg.baseline.n2v, cfg.baseline.threshold);
  write_json_file(st.out, result.plan);
  out << "matched " << result.matched_context << " (cosine "
      << format_double(std::round(result.cosine * 1e4) / 1e4) << ")\n"
      << coverage_report(result.plan, ctx);
  return kExitOk;
}

inline int cmd_compare(const CliState& st, std::ostream& out) {
  guard_outputs({st.plan_a, st.plan_b, st.context}, {st.json_out});
  auto read_plan = [](const std::string& path) {
    auto j = read_json_file(path);
    if (j.is_object()) j.erase("model_meta");
    try {
      return j.get<AssessmentPlan>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kParse, path + ": " + e.what());
    }
  };
  const auto a = read_plan(st.plan_a);
  const auto b = read_plan(st.plan_b);
  const auto ctx = load_descriptor(st.context);
  const auto cmp = compare_plans(a, b, ctx);
  const auto j = comparison_to_json(cmp);
  if (!st.json_out.empty()) write_json_file(st.json_out, j);
  out << "plan_a covers " << cmp.a.covered << "/" << cmp.a.total << " attributes, "
      << cmp.a.rules << " rules, " << cmp.a.dimensions << " dimensions\n"
      << "plan_b covers " << cmp.b.covered << "/" << cmp.b.total << " attributes, "
      << cmp.b.rules << " rules, " << cmp.b.dimensions << " dimensions\n";
  return kExitOk;
}

inline int cmd_gridsearch(const CliState& st, std::ostream& out) {
  guard_outputs({st.graph, st.grid, st.config}, {st.leaderboard_out});
  auto cfg = config_with_overrides(st);
  const auto graph = load_triples_csv(st.graph);
  auto [grid, base] = grid_from_json(read_json_file(st.grid));
  Hyperparams hp = base ? *base : cfg.hp;
  if (st.seed) hp.seed = *st.seed;
  validate(hp);
  const auto split = split_train_test(graph, cfg.test_fraction, hp.seed);
  const auto result =
      grid_search(split.train, split.test, grid, hp, st.budget_epochs.value_or(hp.epochs));
  const auto j = leaderboard_to_json(result);
  if (!st.leaderboard_out.empty()) write_json_file(st.leaderboard_out, j);
  for (std::size_t i = 0; i < result.leaderboard.size(); ++i) {
    const auto& row = result.leaderboard[i];
    out << i + 1 << ". combination " << row.combination << " validation loss "
        << format_double(row.validation_loss) << "\n";
  }
  return kExitOk;
}

}  // namespace detail

/// Entry point of the command-line tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  detail::CliState st;
  CLI::App app{"Context-aware data quality assessment planning with weighted KG embeddings",
               "qakge"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto existing = CLI::ExistingFile;
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", st.seed, "Seed for every random component");
  };
  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", st.config, "JSON run configuration")->check(existing);
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic context graph");
  synth->add_option("--contexts", st.contexts, "Number of contexts")->check(CLI::PositiveNumber);
  add_seed(synth);
  add_config(synth);
  synth->add_option("--out", st.out, "Triple CSV output")->required();
  synth->add_option("--ground-truth-out", st.ground_truth_out, "Ground-truth plans (JSON)");

  auto* profile = app.add_subcommand("profile", "Build a context descriptor from a CSV dataset");
  profile->add_option("--data", st.data, "Dataset CSV")->required()->check(existing);
  profile->add_option("--overlay", st.overlay, "Descriptor overlay JSON")
      ->required()
      ->check(existing);
  profile->add_option("--delimiter", st.delimiter, "Field delimiter");
  profile->add_option("--out", st.out, "Descriptor JSON output")->required();

  auto* trn = app.add_subcommand("train", "Split a graph and train a ComplEx-FocusE model");
  trn->add_option("--graph", st.graph, "Triple CSV")->required()->check(existing);
  add_config(trn);
  add_seed(trn);
  trn->add_option("--test-fraction", st.test_fraction, "Held-out fraction");
  trn->add_option("--out", st.out, "Checkpoint output")->required();
  trn->add_option("--report-out", st.report_out, "Training report JSON");

  auto* ev = app.add_subcommand("eval", "Rank held-out triples with a trained model");
  ev->add_option("--model", st.model, "Checkpoint")->required()->check(existing);
  ev->add_option("--graph", st.graph, "Triple CSV the model was trained from")
      ->required()
      ->check(existing);
  ev->add_option("--test-fraction", st.test_fraction, "Held-out fraction");
  ev->add_option("--protocol", st.protocol, "raw or filtered")
      ->check(CLI::IsMember({"raw", "filtered"}));
  add_config(ev);
  add_seed(ev);
  ev->add_option("--json-out", st.json_out, "Metrics JSON output");

  auto* pl = app.add_subcommand("plan", "Predict an assessment plan for a new context");
  pl->add_option("--graph", st.graph, "Triple CSV")->required()->check(existing);
  pl->add_option("--context", st.context, "Context descriptor JSON")->required()->check(existing);
  add_config(pl);
  add_seed(pl);
  pl->add_option("--warm-start", st.warm_start, "Checkpoint used to initialize matching rows")
      ->check(existing);
  pl->add_option("--out", st.out, "Plan JSON output")->required();
  pl->add_option("--report-out", st.report_out, "Text coverage report");

  auto* bl = app.add_subcommand("baseline", "Retrieve the plan of the most similar context");
  bl->add_option("--graph", st.graph, "Triple CSV")->required()->check(existing);
  bl->add_option("--context", st.context, "Context descriptor JSON")->required()->check(existing);
  bl->add_option("--threshold", st.threshold, "Minimum cosine similarity")
      ->check(CLI::Range(-1.0, 1.0));
  add_config(bl);
  add_seed(bl);
  bl->add_option("--out", st.out, "Plan JSON output")->required();

  auto* cmp = app.add_subcommand("compare", "Compare attribute coverage of two plans");
  cmp->add_option("--plan-a", st.plan_a, "First plan JSON")->required()->check(existing);
  cmp->add_option("--plan-b", st.plan_b, "Second plan JSON")->required()->check(existing);
  cmp->add_option("--context", st.context, "Context descriptor JSON")->required()->check(existing);
  cmp->add_option("--json-out", st.json_out, "Comparison JSON output");

  auto* gs = app.add_subcommand("gridsearch", "Rank hyperparameter combinations");
  gs->add_option("--graph", st.graph, "Triple CSV")->required()->check(existing);
  gs->add_option("--grid", st.grid, "Grid JSON")->required()->check(existing);
  gs->add_option("--budget-epochs", st.budget_epochs, "Epochs per combination")
      ->check(CLI::PositiveNumber);
  add_config(gs);
  add_seed(gs);
  gs->add_option("--test-fraction", st.test_fraction, "Validation fraction");
  gs->add_option("--leaderboard-out", st.leaderboard_out, "Leaderboard JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (synth->parsed()) return detail::cmd_synth(st, out);
    if (profile->parsed()) return detail::cmd_profile(st, out);
    if (trn->parsed()) return detail::cmd_train(st, out);
    if (ev->parsed()) return detail::cmd_eval(st, out);
    if (pl->parsed()) return detail::cmd_plan(st, out);
    if (bl->parsed()) return detail::cmd_baseline(st, out);
    if (cmp->parsed()) return detail::cmd_compare(st, out);
    if (gs->parsed()) return detail::cmd_gridsearch(st, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace qakge
