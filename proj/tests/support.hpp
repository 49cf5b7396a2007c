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

#include <unistd.h>

#include <algorithm>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qakge/qakge.hpp"

namespace qakge::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("qakge_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Random graph with `n_ent` entities e00.., `n_rel` relations r0.. and
/// `n_triples` distinct triples carrying weights in [0,1].
inline TripleGraph random_graph(std::size_t n_ent, std::size_t n_rel, std::size_t n_triples,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<WeightedTriple> triples;
  TripleKeySet seen;
  auto name = [](char c, std::size_t i) {
    return std::string(1, c) + (i < 10 ? "0" : "") + std::to_string(i);
  };
  while (triples.size() < n_triples) {
    const auto s = static_cast<std::uint32_t>(rng() % n_ent);
    const auto p = static_cast<std::uint32_t>(rng() % n_rel);
    const auto o = static_cast<std::uint32_t>(rng() % n_ent);
    if (!seen.insert({s, p, o}).second) continue;
    const double w = static_cast<double>(rng() % 1001) / 1000.0;
    triples.push_back({name('e', s), name('r', p), name('e', o), w});
  }
  return TripleGraph(std::move(triples));
}

/// Score through std::complex, independent of the production kernels.
inline double oracle_score(const ModelParams& m, std::uint32_t s, std::uint32_t p,
                           std::uint32_t o) {
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < m.k; ++j) {
    const std::complex<double> es(m.ent_re.row(s)[j], m.ent_im.row(s)[j]);
    const std::complex<double> wp(m.rel_re.row(p)[j], m.rel_im.row(p)[j]);
    const std::complex<double> eo(m.ent_re.row(o)[j], m.ent_im.row(o)[j]);
    acc += es * wp * std::conj(eo);
  }
  return acc.real();
}

/// Exhaustive ranking: scores every candidate triple, sorts descending and
/// reads the mid-rank of the tie block containing the true triple.
inline std::size_t oracle_rank(const ModelParams& m, const IndexedTriple& t, Side side,
                               const TripleKeySet& known, Protocol protocol) {
  const double truth = oracle_score(m, t.s, t.p, t.o);
  std::vector<double> scores;
  for (std::uint32_t e = 0; e < m.num_entities(); ++e) {
    TripleKey key{t.s, t.p, t.o};
    (side == Side::kObject ? key.o : key.s) = e;
    const bool is_truth = key.s == t.s && key.o == t.o;
    if (is_truth) continue;
    if (protocol == Protocol::kFiltered && known.contains(key)) continue;
    scores.push_back(oracle_score(m, key.s, key.p, key.o));
  }
  std::sort(scores.begin(), scores.end(), std::greater<>());
  std::size_t above = 0;
  std::size_t tied = 0;
  for (double s : scores) {
    if (s > truth) ++above;
    else if (s == truth) ++tied;
  }
  // Positions of the tie block (truth included) are above+1 .. above+tied+1.
  // The mid position, rounded half up, is the reported rank.
  const double lo = static_cast<double>(above + 1);
  const double hi = static_cast<double>(above + tied + 1);
  return static_cast<std::size_t>(std::floor((lo + hi) / 2.0 + 0.5));
}

/// Model whose every score is an exact small integer combination, so ties
/// are reproducible across evaluation orders.
inline ModelParams integer_model(const Vocabulary& vocab, std::size_t k, std::uint64_t seed,
                                 int range = 2) {
  ModelParams m = init_model(vocab, k, seed);
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  for (Matrix* mat : {&m.ent_re, &m.ent_im, &m.rel_re, &m.rel_im})
    for (double& x : mat->data)
      x = static_cast<double>(static_cast<int>(rng() % (2 * range + 1)) - range);
  return m;
}

// ---------------------------------------------------------------------------
// Finite-difference gradient check.

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t components = 0;
  bool accepted = false;  // false when the instance sits too close to a hinge kink
};

/// Central differences over every touched component of a random instance.
inline GradCheckResult check_gradient(const ModelParams& m, std::span<const IndexedTriple> pos,
                                      std::span<const IndexedTriple> neg,
                                      const ObjectiveSettings& s, double h = 1e-6) {
  GradCheckResult out;
  // Reject instances whose hinge arguments lie within reach of the step.
  {
    const std::size_t eta = neg.size() / pos.size();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const double gp = focuse_modulate(complex_score(m, pos[i]), pos[i].w, s.beta, true);
      for (std::size_t j = 0; j < eta; ++j) {
        const double gn =
            focuse_modulate(complex_score(m, neg[i * eta + j]), pos[i].w, s.beta, false);
        if (std::abs(s.margin + gn - gp) < 1e-4) return out;
      }
    }
  }
  out.accepted = true;
  const auto analytic = gradient_of_loss(m, pos, neg, s);
  ModelParams probe = m;
  auto check = [&](Matrix ModelParams::*param, const Matrix Gradient::*grad,
                   const std::vector<std::uint32_t>& rows) {
    for (auto r : rows) {
      for (std::size_t j = 0; j < m.k; ++j) {
        double& x = (probe.*param).row(r)[j];
        const double x0 = x;
        x = x0 + h;
        const double up = batch_objective(probe, pos, neg, s, nullptr);
        x = x0 - h;
        const double down = batch_objective(probe, pos, neg, s, nullptr);
        x = x0;
        const double numeric = (up - down) / (2.0 * h);
        const double a = (analytic.gradient.*grad).row(r)[j];
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-3});
        out.max_rel_error = std::max(out.max_rel_error, std::abs(a - numeric) / denom);
        ++out.components;
      }
    }
  };
  check(&ModelParams::ent_re, &Gradient::ent_re, analytic.gradient.touched_entities);
  check(&ModelParams::ent_im, &Gradient::ent_im, analytic.gradient.touched_entities);
  check(&ModelParams::rel_re, &Gradient::rel_re, analytic.gradient.touched_relations);
  check(&ModelParams::rel_im, &Gradient::rel_im, analytic.gradient.touched_relations);
  return out;
}

// ---------------------------------------------------------------------------
// Radiation-monitoring scenario.

inline ContextDescriptor radiation_context(const std::string& id,
                                           std::vector<Attribute> attributes) {
  ContextDescriptor c;
  c.context_id = id;
  c.data_type = DataType::kStructured;
  c.attributes = std::move(attributes);
  c.data_source = "laec sensor network";
  c.size_bucket = "small";
  c.analysis_scope = "real-time monitoring";
  c.domain = "radiation monitoring";
  c.content_type = "dose measurements";
  c.file_format = "csv";
  c.org_standards = {"IAEA safety standards"};
  c.org_policies = {"public exposure reporting"};
  c.security_level = "restricted";
  c.est_resources = "moderate";
  c.est_time = "hours";
  return c;
}

/// Stored context: three attributes, seven rule edges.
inline ContextDescriptor stored_radiation_context() {
  return radiation_context("radiation_station_archive",
                           {{"dose_rate", AttributeType::kNumeric},
                            {"location", AttributeType::kText},
                            {"timestamp", AttributeType::kDate}});
}

inline AssessmentPlan stored_radiation_plan() {
  AssessmentPlan p;
  p.context_id = "radiation_station_archive";
  p.rule_edges = {{"dose_rate", "outliers_detection", 0.9, std::nullopt},
                  {"dose_rate", "range_check", 0.85, std::nullopt},
                  {"dose_rate", "missing_values", 0.8, std::nullopt},
                  {"location", "null_count", 0.7, std::nullopt},
                  {"location", "data_inconsistency", 0.6, std::nullopt},
                  {"timestamp", "format_validity", 0.75, std::nullopt},
                  {"timestamp", "duplication_check", 0.65, std::nullopt}};
  p.canonicalize();
  return p;
}

/// Query context: the five attributes of the new sensor feed.
inline ContextDescriptor query_radiation_context() {
  return radiation_context("radiation_feed_2024",
                           {{"dose_rate", AttributeType::kNumeric},
                            {"location", AttributeType::kText},
                            {"battery_level", AttributeType::kNumeric},
                            {"rain_level", AttributeType::kNumeric},
                            {"timestamp", AttributeType::kDate}});
}

/// Generator settings for the scenario graph: a small pool of unrelated
/// domains so that only the two radiation contexts share their values.
inline GeneratorConfig radiation_generator_config() {
  GeneratorConfig g;
  g.n_contexts = 12;
  g.seed = 11;
  g.attrs_per_context = {3, 8};
  g.domain_pool = {"iot", "social media", "healthcare", "finance", "news", "retail"};
  return g;
}

inline SyntheticGraph radiation_scenario_graph() {
  auto g = generate_synthetic_graph(radiation_generator_config());
  inject_context(g, stored_radiation_context(), stored_radiation_plan());
  return g;
}

}  // namespace qakge::testing
