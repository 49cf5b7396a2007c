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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/context_model.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

/// Undirected simple graph over the entities of a triple graph. Relation
/// labels, weights, duplicate edges and self-loops are dropped.
struct AdjacencyStructure {
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> neighbors;  // sorted

  std::size_t size() const { return nodes.size(); }

  bool adjacent(std::uint32_t u, std::uint32_t v) const {
    const auto& n = neighbors[u];
    return std::binary_search(n.begin(), n.end(), v);
  }

  std::uint32_t node_index(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) fail(ErrorKind::kNotFound, "unknown node '" + name + "'");
    return it->second;
  }
};

inline AdjacencyStructure build_adjacency(const TripleGraph& graph) {
  AdjacencyStructure adj;
  adj.nodes = graph.vocab().entities();
  adj.neighbors.resize(adj.nodes.size());
  for (std::size_t i = 0; i < adj.nodes.size(); ++i)
    adj.index.emplace(adj.nodes[i], static_cast<std::uint32_t>(i));
  for (const auto& t : graph.indexed()) {
    if (t.s == t.o) continue;
    adj.neighbors[t.s].push_back(t.o);
    adj.neighbors[t.o].push_back(t.s);
  }
  for (auto& n : adj.neighbors) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return adj;
}

struct Node2VecConfig {
  double p = 1.0;
  double q = 1.0;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  std::size_t dim = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
};

inline void validate(const Node2VecConfig& c) {
  require(c.p > 0.0 && c.q > 0.0, "node2vec p and q must be positive");
  require(c.walk_length >= 2, "walk_length must be at least 2");
  require(c.walks_per_node >= 1, "walks_per_node must be at least 1");
  require(c.dim >= 1, "embedding dimension must be at least 1");
  require(c.window >= 1, "window must be at least 1");
  require(c.epochs >= 1, "epochs must be at least 1");
  require(c.learning_rate >= 0.0, "learning rate must be non-negative");
}

/// Normalized second-order transition probabilities from `cur` (reached
/// from `prev`) to each of cur's neighbors, in neighbor order. Weight 1/p
/// returns to prev, 1 moves to a common neighbor of prev and cur, 1/q
/// moves further away. Without `prev` the step is uniform.
inline std::vector<double> transition_probabilities(const AdjacencyStructure& adj,
                                                    std::optional<std::uint32_t> prev,
                                                    std::uint32_t cur, double p, double q) {
  const auto& nbrs = adj.neighbors[cur];
  std::vector<double> w(nbrs.size(), 1.0);
  if (prev && (p != 1.0 || q != 1.0)) {
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] == *prev) {
        w[i] = 1.0 / p;
      } else if (!adj.adjacent(*prev, nbrs[i])) {
        w[i] = 1.0 / q;
      }
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

namespace detail {

inline std::size_t sample_discrete(std::span<const double> probs, Rng& rng) {
  double u = uniform01(rng);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (u < probs[i]) return i;
    u -= probs[i];
  }
  return probs.size() - 1;
}

}  // namespace detail

/// `walks_per_node` biased walks from every node; each round visits nodes
/// in a fresh seeded order. Walks from isolated nodes are singletons.
inline std::vector<std::vector<std::uint32_t>> generate_walks(const AdjacencyStructure& adj,
                                                              double p, double q,
                                                              std::size_t walks_per_node,
                                                              std::size_t walk_length,
                                                              std::uint64_t seed) {
  require(p > 0.0 && q > 0.0, "node2vec p and q must be positive");
  require(walk_length >= 2, "walk_length must be at least 2");
  Rng rng(seed);
  std::vector<std::uint32_t> starts(adj.size());
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = static_cast<std::uint32_t>(i);
  std::vector<std::vector<std::uint32_t>> walks;
  walks.reserve(adj.size() * walks_per_node);
  for (std::size_t round = 0; round < walks_per_node; ++round) {
    shuffle(starts, rng);
    for (auto start : starts) {
      std::vector<std::uint32_t> walk = {start};
      std::optional<std::uint32_t> prev;
      while (walk.size() < walk_length) {
        const std::uint32_t cur = walk.back();
        if (adj.neighbors[cur].empty()) break;
        auto probs = transition_probabilities(adj, prev, cur, p, q);
        const auto next = adj.neighbors[cur][detail::sample_discrete(probs, rng)];
        prev = cur;
        walk.push_back(next);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

/// (center, context) pairs within `window` positions, in walk order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> skipgram_pairs(
    std::span<const std::uint32_t> walk, std::size_t window) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(walk.size() - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j)
      if (j != i) pairs.emplace_back(walk[i], walk[j]);
  }
  return pairs;
}

struct NodeEmbeddings {
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::uint32_t> index;
  std::size_t dim = 0;
  std::vector<double> data;  // row-major, nodes.size() x dim

  std::span<const double> vector(std::uint32_t i) const {
    return {data.data() + i * dim, dim};
  }
  std::span<const double> vector(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) fail(ErrorKind::kNotFound, "node '" + name + "' is not embedded");
    return vector(it->second);
  }
};

struct SkipGramConfig {
  std::size_t dim = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
};

/// Skip-gram with negative sampling: for each co-window pair maximizes
/// log s(u.v) plus `negatives` noise terms log s(-u.v'), with noise nodes
/// drawn from the unigram^0.75 distribution. Plain SGD with a linearly
/// decaying learning rate; rows of the input matrix are the embeddings.
inline NodeEmbeddings train_skipgram(const std::vector<std::vector<std::uint32_t>>& walks,
                                     const std::vector<std::string>& nodes,
                                     const SkipGramConfig& cfg) {
  require(cfg.dim >= 1, "embedding dimension must be at least 1");
  require(!walks.empty(), "skip-gram needs at least one walk");
  const std::size_t n = nodes.size();
  const std::size_t d = cfg.dim;
  Rng rng(cfg.seed);

  NodeEmbeddings emb;
  emb.nodes = nodes;
  emb.dim = d;
  for (std::size_t i = 0; i < n; ++i) emb.index.emplace(nodes[i], static_cast<std::uint32_t>(i));
  emb.data.resize(n * d);
  for (double& x : emb.data) x = (uniform01(rng) - 0.5) / static_cast<double>(d);
  std::vector<double> out_vecs(n * d, 0.0);

  std::vector<double> counts(n, 0.0);
  std::size_t total_pairs = 0;
  for (const auto& w : walks) {
    for (auto v : w) {
      require(v < n, "walk references an unknown node");
      counts[v] += 1.0;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
      const std::size_t hi = std::min(w.size() - 1, i + cfg.window);
      total_pairs += hi - lo;
    }
  }
  std::vector<double> cdf(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::pow(counts[i], 0.75);
    cdf[i] = acc;
  }
  auto draw_noise = [&]() -> std::uint32_t {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), n - 1));
  };

  const double total_steps = static_cast<double>(total_pairs * cfg.epochs);
  double step = 0.0;
  std::vector<double> grad_in(d);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& w : walks) {
      for (const auto& [center, context] : skipgram_pairs(w, cfg.window)) {
        const double lr =
            cfg.learning_rate * std::max(1e-4, 1.0 - step / std::max(1.0, total_steps));
        step += 1.0;
        double* u = emb.data.data() + center * d;
        std::fill(grad_in.begin(), grad_in.end(), 0.0);
        for (std::size_t s = 0; s <= cfg.negatives; ++s) {
          std::uint32_t target = context;
          double label = 1.0;
          if (s > 0) {
            target = draw_noise();
            if (target == context) continue;
            label = 0.0;
          }
          double* v = out_vecs.data() + target * d;
          double dot = 0.0;
          for (std::size_t j = 0; j < d; ++j) dot += u[j] * v[j];
          const double g = (label - sigmoid(dot)) * lr;
          for (std::size_t j = 0; j < d; ++j) {
            grad_in[j] += g * v[j];
            v[j] += g * u[j];
          }
        }
        for (std::size_t j = 0; j < d; ++j) u[j] += grad_in[j];
      }
    }
  }
  return emb;
}

inline NodeEmbeddings node2vec(const AdjacencyStructure& adj, const Node2VecConfig& cfg) {
  validate(cfg);
  auto walks = generate_walks(adj, cfg.p, cfg.q, cfg.walks_per_node, cfg.walk_length,
                              derive_seed(cfg.seed, 10));
  return train_skipgram(walks, adj.nodes,
                        {cfg.dim, cfg.window, cfg.negatives, cfg.epochs, cfg.learning_rate,
                         derive_seed(cfg.seed, 11)});
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "cosine of vectors with different dimensions");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorKind::kInvalidArgument, "zero-norm vector");
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

struct ContextMatch {
  std::string context_id;
  double cosine = 0.0;
};

/// Most cosine-similar candidate (K=1); nullopt below `threshold`. Ties go
/// to the lexicographically smaller id. The query is never its own match.
inline std::optional<ContextMatch> nearest_context(const NodeEmbeddings& emb,
                                                   const std::string& query,
                                                   const std::vector<std::string>& candidates,
                                                   double threshold) {
  require(threshold >= -1.0 && threshold <= 1.0, "threshold must lie in [-1,1]");
  auto norm_check = [&](const std::string& node) {
    auto v = emb.vector(node);
    double n = 0.0;
    for (double x : v) n += x * x;
    if (n == 0.0)
      fail(ErrorKind::kInvalidArgument, "node '" + node + "' has a zero-norm embedding");
    return v;
  };
  const auto qv = norm_check(query);
  std::optional<ContextMatch> best;
  for (const auto& c : candidates) {
    if (c == query) continue;
    const double cos = cosine_similarity(qv, norm_check(c));
    if (!best || cos > best->cosine || (cos == best->cosine && c < best->context_id))
      best = ContextMatch{c, cos};
  }
  if (!best || best->cosine < threshold) return std::nullopt;
  return best;
}

struct BaselineResult {
  AssessmentPlan plan;          // matched plan, relabelled with the query id
  std::string matched_context;
  double cosine = 0.0;
};

/// Contexts other than `query` that own a non-empty plan.
inline std::vector<std::string> plan_holding_contexts(const TripleGraph& graph,
                                                      const std::string& query) {
  std::vector<std::string> out;
  for (const auto& id : context_ids(graph))
    if (id != query && !extract_plan(graph, id).rule_edges.empty()) out.push_back(id);
  return out;
}

/// Retrieves the stored plan of the most similar context verbatim.
/// Attributes of the query without a counterpart stay uncovered.
inline BaselineResult baseline_plan(const TripleGraph& graph, const NodeEmbeddings& emb,
                                    const std::string& query_context, double threshold) {
  if (!has_context(graph, query_context))
    fail(ErrorKind::kNotFound, "unknown context '" + query_context + "'");
  auto match = nearest_context(emb, query_context,
                               plan_holding_contexts(graph, query_context), threshold);
  if (!match)
    fail(ErrorKind::kNotFound, "no stored context reaches similarity threshold " +
                                   format_double(threshold) + " for '" + query_context + "'");
  BaselineResult out;
  out.plan = extract_plan(graph, match->context_id);
  out.plan.context_id = query_context;
  out.matched_context = match->context_id;
  out.cosine = match->cosine;
  return out;
}

/// Full pipeline: adjacency, walks, skip-gram, K-NN retrieval.
inline BaselineResult baseline_plan(const TripleGraph& graph, const std::string& query_context,
                                    const Node2VecConfig& cfg, double threshold) {
  const auto emb = node2vec(build_adjacency(graph), cfg);
  return baseline_plan(graph, emb, query_context, threshold);
}

inline void save_embeddings_csv(const NodeEmbeddings& emb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  for (std::uint32_t i = 0; i < emb.nodes.size(); ++i) {
    out << csv::escape(emb.nodes[i]);
    for (double x : emb.vector(i)) out << ',' << format_double(x);
    out << '\n';
  }
}

}  // namespace qakge
