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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qakge/common.hpp"
#include "qakge/context_model.hpp"
#include "qakge/grid_search.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/node2vec.hpp"
#include "qakge/synth_graph.hpp"

namespace qakge {

struct BaselineConfig {
  Node2VecConfig n2v;
  double threshold = 0.7;
};

struct PlannerSettings {
  double tau = 0.5;
  std::size_t top_m = 3;
};

/// Every section is optional; absent keys keep their defaults.
struct RunConfig {
  Hyperparams hp;
  GeneratorConfig generator;
  BaselineConfig baseline;
  PlannerSettings planner;
  double test_fraction = 0.2;
  /// Applied to every seeded component when present.
  std::optional<std::uint64_t> seed;
};

namespace detail {

class Section {
 public:
  Section(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::kParse, where() + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("number");
        out = v.get<double>();
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw std::invalid_argument("non-negative integer");
        out = v.get<T>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("integer");
        out = v.get<T>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("string");
        out = v.get<std::string>();
      } else {
        out = v.get<T>();
      }
    } catch (const std::exception& e) {
      fail(ErrorKind::kParse, where(key) + ": expected " + e.what());
    }
  }

  void range(const char* key, IntRange& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
      fail(ErrorKind::kParse, where(key) + ": expected [lo, hi] integers");
    out = {v[0].get<int>(), v[1].get<int>()};
  }

  void strings(const char* key, std::vector<std::string>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(ErrorKind::kParse, where(key) + ": expected a list of strings");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) fail(ErrorKind::kParse, where(key) + ": expected a list of strings");
      out.push_back(e.get<std::string>());
    }
  }

  template <typename T>
  void list(const char* key, std::vector<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(ErrorKind::kParse, where(key) + ": expected a list");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      nlohmann::json wrap = {{"v", v[i]}};
      Section s(wrap, where(key) + "[" + std::to_string(i) + "]");
      T x{};
      s.get("v", x);
      out.push_back(x);
    }
  }

  /// Absent or null yields nullopt.
  std::optional<double> optional_double(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    double v = 0.0;
    get(key, v);
    return v;
  }

  std::optional<Section> child(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return Section(j_.at(key), where(key));
  }

  /// Fails on keys that no accessor asked for.
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) fail(ErrorKind::kParse, where(k.c_str()) + ": unknown key");
  }

 private:
  std::string where(const char* key = nullptr) const {
    std::string w = path_.empty() ? "config" : path_;
    if (key) w += (path_.empty() ? ": " : ".") + std::string(key);
    return w;
  }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline CorruptionMode corruption_from(const std::string& s, const std::string& where) {
  auto m = parse_corruption_mode(s);
  if (!m) fail(ErrorKind::kParse, where + ": unknown corruption mode '" + s + "'");
  return *m;
}

inline void read_hyperparams(Section& s, Hyperparams& hp) {
  s.get("k", hp.k);
  s.get("eta", hp.eta);
  s.get("batch_size", hp.batch_size);
  s.get("learning_rate", hp.learning_rate);
  s.get("margin", hp.margin);
  s.get("epochs", hp.epochs);
  std::string mode(to_string(hp.corruption_mode));
  s.get("corruption_mode", mode);
  hp.corruption_mode = corruption_from(mode, "hyperparams.corruption_mode");
  s.get("reg_p", hp.reg_p);
  s.get("reg_lambda", hp.reg_lambda);
  s.get("beta_decay_epochs", hp.beta_decay_epochs);
  if (auto it = s.optional_double("fixed_beta")) hp.fixed_beta = *it;
  s.get("seed", hp.seed);
  s.get("adam_beta1", hp.adam_beta1);
  s.get("adam_beta2", hp.adam_beta2);
  s.get("adam_eps", hp.adam_eps);
  s.get("num_threads", hp.num_threads);
  s.finish();
}

}  // namespace detail

inline void validate(const RunConfig& c) {
  validate(c.hp);
  validate(c.generator);
  validate(c.baseline.n2v);
  require(c.baseline.threshold >= -1.0 && c.baseline.threshold <= 1.0,
          "baseline.threshold must lie in [-1,1]");
  require(c.planner.top_m >= 1, "planner.top_m must be at least 1");
  require(std::isfinite(c.planner.tau), "planner.tau must be finite");
  require(c.test_fraction > 0.0 && c.test_fraction < 1.0,
          "split.test_fraction must lie in (0,1)");
}

/// Parses and validates a run configuration. Unknown keys are errors.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  detail::Section root(j, "");
  if (auto s = root.child("hyperparams")) detail::read_hyperparams(*s, c.hp);
  if (auto s = root.child("generator")) {
    auto& g = c.generator;
    s->get("n_contexts", g.n_contexts);
    s->get("seed", g.seed);
    s->range("attrs_per_context", g.attrs_per_context);
    s->range("rules_per_attribute", g.rules_per_attribute);
    s->range("dims_per_rule", g.dims_per_rule);
    s->get("weight_min", g.weight_min);
    s->get("weight_max", g.weight_max);
    s->strings("domain_pool", g.domain_pool);
    s->strings("source_pool", g.source_pool);
    s->strings("format_pool", g.format_pool);
    s->get("context_prefix", g.context_prefix);
    s->get("rule_affinity", g.rule_affinity);
    s->finish();
  }
  if (auto s = root.child("baseline")) {
    auto& b = c.baseline.n2v;
    s->get("p", b.p);
    s->get("q", b.q);
    s->get("walks_per_node", b.walks_per_node);
    s->get("walk_length", b.walk_length);
    s->get("dim", b.dim);
    s->get("window", b.window);
    s->get("negatives", b.negatives);
    s->get("epochs", b.epochs);
    s->get("learning_rate", b.learning_rate);
    s->get("seed", b.seed);
    s->get("threshold", c.baseline.threshold);
    s->finish();
  }
  if (auto s = root.child("planner")) {
    s->get("tau", c.planner.tau);
    s->get("top_m", c.planner.top_m);
    s->finish();
  }
  if (auto s = root.child("split")) {
    s->get("test_fraction", c.test_fraction);
    s->finish();
  }
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    root.get("seed", seed);
    c.seed = seed;
  } else {
    root.get("seed", seed);
  }
  root.finish();
  if (c.seed) {
    c.hp.seed = *c.seed;
    c.generator.seed = *c.seed;
    c.baseline.n2v.seed = *c.seed;
  }
  validate(c);
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path));
}

/// Grid file: {"base": {hyperparams...}, "grid": {"k": [...], ...}}, or a bare
/// grid object.
inline std::pair<HyperparamGrid, std::optional<Hyperparams>> grid_from_json(
    const nlohmann::json& j) {
  HyperparamGrid g;
  std::optional<Hyperparams> base;
  const bool wrapped = j.is_object() && (j.contains("grid") || j.contains("base"));
  detail::Section root(j, "grid");
  const nlohmann::json* grid_json = &j;
  if (wrapped) {
    if (auto s = root.child("base")) {
      Hyperparams hp;
      detail::read_hyperparams(*s, hp);
      base = hp;
    }
    root.child("grid");
    root.finish();
    if (!j.contains("grid")) fail(ErrorKind::kParse, "grid file has no 'grid' section");
    grid_json = &j.at("grid");
  }
  detail::Section s(*grid_json, "grid");
  s.list("k", g.k);
  s.list("eta", g.eta);
  s.list("batch_size", g.batch_size);
  s.list("learning_rate", g.learning_rate);
  s.list("margin", g.margin);
  std::vector<std::string> modes;
  s.list("corruption_mode", modes);
  for (const auto& m : modes)
    g.corruption_mode.push_back(detail::corruption_from(m, "grid.corruption_mode"));
  s.list("reg_lambda", g.reg_lambda);
  s.finish();
  if (g.empty()) fail(ErrorKind::kInvalidArgument, "hyperparameter grid is empty");
  return {g, base};
}

}  // namespace qakge
