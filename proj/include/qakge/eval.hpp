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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qakge/common.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/kge_train.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

enum class Side { kSubject, kObject };
enum class Protocol { kRaw, kFiltered };

inline std::string_view to_string(Protocol p) {
  return p == Protocol::kRaw ? "raw" : "filtered";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "raw") return Protocol::kRaw;
  if (s == "filtered") return Protocol::kFiltered;
  return std::nullopt;
}

/// Known-positive keys of one or more graphs, resolved against `vocab`.
/// Triples with symbols outside the vocabulary cannot be candidates and are
/// skipped.
inline TripleKeySet known_positives(const Vocabulary& vocab,
                                    std::initializer_list<const TripleGraph*> graphs) {
  TripleKeySet keys;
  for (const auto* g : graphs) {
    for (const auto& t : g->triples()) {
      auto s = vocab.find_entity(t.source);
      auto p = vocab.find_relation(t.relation);
      auto o = vocab.find_entity(t.target);
      if (s && p && o) keys.insert({*s, *p, *o});
    }
  }
  return keys;
}

/// Mid-rank for ties, rounded half up: 1 + greater + ceil(equal / 2).
inline std::size_t rank_from_counts(std::size_t greater, std::size_t equal) {
  return 1 + greater + (equal + 1) / 2;
}

/// Rank of the test triple among all replacements of one side. In filtered
/// mode candidates that form another known positive are skipped.
inline std::size_t rank_triple(const ModelParams& m, const IndexedTriple& t, Side side,
                               const TripleKeySet& known, Protocol protocol) {
  const std::size_t n = m.num_entities();
  if (t.s >= n || t.o >= n || t.p >= m.num_relations())
    fail(ErrorKind::kNotFound, "test triple symbol outside the model vocabulary");
  const std::size_t k = m.k;
  // Fold the fixed side into one complex vector q so every candidate
  // (including the true one) is scored by the same expression:
  //   object side:  f(e) = sum q_re*x_e + q_im*y_e,  q = e_s * w_p
  //   subject side: f(e) = sum a_e*q_re - b_e*q_im,   q = w_p * conj(e_o)
  std::vector<double> q_re(k);
  std::vector<double> q_im(k);
  {
    auto c = m.rel_re.row(t.p);
    auto d = m.rel_im.row(t.p);
    if (side == Side::kObject) {
      auto a = m.ent_re.row(t.s);
      auto b = m.ent_im.row(t.s);
      for (std::size_t j = 0; j < k; ++j) {
        q_re[j] = a[j] * c[j] - b[j] * d[j];
        q_im[j] = a[j] * d[j] + b[j] * c[j];
      }
    } else {
      auto x = m.ent_re.row(t.o);
      auto y = m.ent_im.row(t.o);
      for (std::size_t j = 0; j < k; ++j) {
        q_re[j] = c[j] * x[j] + d[j] * y[j];
        q_im[j] = d[j] * x[j] - c[j] * y[j];
      }
    }
  }
  auto score = [&](std::size_t e) {
    auto re = m.ent_re.row(e);
    auto im = m.ent_im.row(e);
    double f = 0.0;
    if (side == Side::kObject) {
      for (std::size_t j = 0; j < k; ++j) f += q_re[j] * re[j] + q_im[j] * im[j];
    } else {
      for (std::size_t j = 0; j < k; ++j) f += re[j] * q_re[j] - im[j] * q_im[j];
    }
    return f;
  };

  const std::uint32_t truth = side == Side::kObject ? t.o : t.s;
  const double target = score(truth);
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (e == truth) continue;
    if (protocol == Protocol::kFiltered) {
      TripleKey key{t.s, t.p, t.o};
      (side == Side::kObject ? key.o : key.s) = static_cast<std::uint32_t>(e);
      if (known.contains(key)) continue;
    }
    const double f = score(e);
    if (f > target) {
      ++greater;
    } else if (f == target) {
      ++equal;
    }
  }
  return rank_from_counts(greater, equal);
}

struct TripleRanks {
  std::size_t subject = 0;
  std::size_t object = 0;
};

struct EvalMetrics {
  double loss = 0.0;
  double mrr = 0.0;
  double mr = 0.0;
  std::map<int, double> hits;
  std::vector<TripleRanks> ranks;
  std::size_t n_test = 0;
  Protocol protocol = Protocol::kFiltered;
};

/// Fills mrr, mr and hits from a flat rank list.
inline void summarize_ranks(std::span<const std::size_t> ranks,
                            std::span<const int> hits_at, EvalMetrics& out) {
  if (ranks.empty()) fail(ErrorKind::kInvalidArgument, "no ranks to summarize");
  double rr = 0.0;
  double r = 0.0;
  std::map<int, std::size_t> hit_count;
  for (int n : hits_at) hit_count[n] = 0;
  for (auto rank : ranks) {
    rr += 1.0 / static_cast<double>(rank);
    r += static_cast<double>(rank);
    for (auto& [n, c] : hit_count)
      if (rank <= static_cast<std::size_t>(n)) ++c;
  }
  const double total = static_cast<double>(ranks.size());
  out.mrr = rr / total;
  out.mr = r / total;
  out.hits.clear();
  for (const auto& [n, c] : hit_count) out.hits[n] = static_cast<double>(c) / total;
}

struct EvalOptions {
  Protocol protocol = Protocol::kFiltered;
  std::vector<int> hits_at = {1, 3, 10};
  /// Settings for the reported loss; skipped when absent.
  std::optional<Hyperparams> loss_hp;
  double loss_beta = 0.0;
};

/// Both-side ranks of every test triple, summarized as MRR, MR and Hits@N.
inline EvalMetrics evaluate(const ModelParams& m, const TripleGraph& test,
                            const TripleKeySet& known, const EvalOptions& opts = {}) {
  if (test.empty()) fail(ErrorKind::kInvalidArgument, "empty test set");
  for (int n : opts.hits_at) require(n >= 1, "hits@N needs N >= 1");
  EvalMetrics out;
  out.protocol = opts.protocol;
  out.n_test = test.size();
  std::vector<std::size_t> flat;
  flat.reserve(2 * test.size());
  for (const auto& t : test.indexed_against(m.vocab)) {
    TripleRanks r{rank_triple(m, t, Side::kSubject, known, opts.protocol),
                  rank_triple(m, t, Side::kObject, known, opts.protocol)};
    out.ranks.push_back(r);
    flat.push_back(r.subject);
    flat.push_back(r.object);
  }
  summarize_ranks(flat, opts.hits_at, out);
  if (opts.loss_hp)
    out.loss = evaluate_loss(m, test, *opts.loss_hp, opts.loss_beta, opts.loss_hp->seed);
  return out;
}

inline nlohmann::json metrics_to_json(const EvalMetrics& e) {
  nlohmann::json hits = nlohmann::json::object();
  for (const auto& [n, v] : e.hits) hits[std::to_string(n)] = v;
  return {{"loss", e.loss},   {"mrr", e.mrr},         {"mr", e.mr},
          {"hits", hits},     {"n_test", e.n_test},
          {"protocol", std::string(to_string(e.protocol))}};
}

}  // namespace qakge
