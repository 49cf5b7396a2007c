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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Complex-valued entity and relation embeddings, stored as separate real
/// and imaginary matrices.
struct ModelParams {
  Vocabulary vocab;
  std::size_t k = 0;
  Matrix ent_re;
  Matrix ent_im;
  Matrix rel_re;
  Matrix rel_im;

  std::size_t num_entities() const { return ent_re.rows; }
  std::size_t num_relations() const { return rel_re.rows; }

  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.vocab == b.vocab && a.k == b.k && a.ent_re == b.ent_re &&
           a.ent_im == b.ent_im && a.rel_re == b.rel_re && a.rel_im == b.rel_im;
  }
};

enum class CorruptionMode { kAll, kBatch };

inline std::string_view to_string(CorruptionMode m) {
  return m == CorruptionMode::kAll ? "all" : "batch";
}

inline std::optional<CorruptionMode> parse_corruption_mode(std::string_view s) {
  if (s == "all") return CorruptionMode::kAll;
  if (s == "batch") return CorruptionMode::kBatch;
  return std::nullopt;
}

/// Training hyperparameters. Defaults follow the grid-searched optimum:
/// k=50, eta=5, batch 64, Adam lr 1e-5, margin 0.5, corruptions from all
/// entities, L4 regularization.
struct Hyperparams {
  std::size_t k = 50;
  std::size_t eta = 5;
  std::size_t batch_size = 64;
  double learning_rate = 1e-5;
  double margin = 0.5;
  std::size_t epochs = 5000;
  CorruptionMode corruption_mode = CorruptionMode::kAll;
  int reg_p = 4;
  double reg_lambda = 1e-4;
  /// 0 means "same as epochs".
  std::size_t beta_decay_epochs = 0;
  /// Holds beta constant instead of decaying it.
  std::optional<double> fixed_beta;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Threads used for per-positive scoring inside a batch. Results do not
  /// depend on this value.
  std::size_t num_threads = 1;

  std::size_t decay_epochs() const {
    return beta_decay_epochs == 0 ? epochs : beta_decay_epochs;
  }
};

inline void validate(const Hyperparams& hp) {
  require(hp.k >= 1, "k must be at least 1");
  require(hp.eta >= 1, "eta must be at least 1");
  require(hp.batch_size >= 1, "batch_size must be at least 1");
  require(hp.learning_rate >= 0.0 && std::isfinite(hp.learning_rate),
          "learning_rate must be finite and non-negative");
  require(hp.margin >= 0.0, "margin must be non-negative");
  require(hp.epochs >= 1, "epochs must be at least 1");
  require(hp.reg_p >= 1, "reg_p must be at least 1");
  require(hp.reg_lambda >= 0.0, "reg_lambda must be non-negative");
  require(hp.adam_beta1 >= 0.0 && hp.adam_beta1 < 1.0, "adam_beta1 must lie in [0,1)");
  require(hp.adam_beta2 >= 0.0 && hp.adam_beta2 < 1.0, "adam_beta2 must lie in [0,1)");
  require(hp.adam_eps > 0.0, "adam_eps must be positive");
  require(hp.num_threads >= 1, "num_threads must be at least 1");
  require(!hp.fixed_beta || (*hp.fixed_beta >= 0.0 && *hp.fixed_beta <= 1.0),
          "fixed_beta must lie in [0,1]");
}

/// Half-width of the uniform initialization range for width-k complex
/// embeddings (real and imaginary parts counted separately).
inline double init_bound(std::size_t k) {
  return std::sqrt(6.0 / (2.0 * static_cast<double>(k)));
}

inline ModelParams init_model(const Vocabulary& vocab, std::size_t k,
                              std::uint64_t seed) {
  require(k >= 1, "embedding dimension k must be at least 1");
  ModelParams m;
  m.vocab = vocab;
  m.k = k;
  m.ent_re = Matrix(vocab.num_entities(), k);
  m.ent_im = Matrix(vocab.num_entities(), k);
  m.rel_re = Matrix(vocab.num_relations(), k);
  m.rel_im = Matrix(vocab.num_relations(), k);
  const double b = init_bound(k);
  Rng rng(seed);
  for (Matrix* mat : {&m.ent_re, &m.ent_im, &m.rel_re, &m.rel_im})
    for (double& x : mat->data) x = uniform_real(rng, -b, b);
  return m;
}

/// Re(sum_j e_s[j] * w_p[j] * conj(e_o[j])), unchecked indices.
inline double complex_score_unchecked(const ModelParams& m, std::uint32_t s,
                                      std::uint32_t p, std::uint32_t o) {
  const double* a = m.ent_re.data.data() + s * m.k;
  const double* b = m.ent_im.data.data() + s * m.k;
  const double* c = m.rel_re.data.data() + p * m.k;
  const double* d = m.rel_im.data.data() + p * m.k;
  const double* x = m.ent_re.data.data() + o * m.k;
  const double* y = m.ent_im.data.data() + o * m.k;
  double f = 0.0;
  for (std::size_t j = 0; j < m.k; ++j) {
    f += (a[j] * c[j] - b[j] * d[j]) * x[j] + (a[j] * d[j] + b[j] * c[j]) * y[j];
  }
  return f;
}

/// ComplEx score: real part of the Hermitian three-way product.
inline double complex_score(const ModelParams& m, std::uint32_t s,
                            std::uint32_t p, std::uint32_t o) {
  if (s >= m.num_entities() || o >= m.num_entities() || p >= m.num_relations())
    fail(ErrorKind::kNotFound, "triple index out of range");
  return complex_score_unchecked(m, s, p, o);
}

inline double complex_score(const ModelParams& m, const IndexedTriple& t) {
  return complex_score(m, t.s, t.p, t.o);
}

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Structural-influence mixing factor. Positives are scaled up with their
/// weight, corruptions with the complement of their positive's weight.
inline double focuse_alpha(double weight, double beta, bool is_positive) {
  const double w = is_positive ? weight : 1.0 - weight;
  return beta + (1.0 - beta) * w;
}

inline double focuse_modulate(double raw_score, double weight, double beta,
                              bool is_positive) {
  return focuse_alpha(weight, beta, is_positive) * softplus(raw_score);
}

/// Linear decay of structural influence: 1 at epoch 0, 0 from
/// `decay_epochs` on.
inline double beta_at(std::size_t epoch, std::size_t decay_epochs) {
  if (decay_epochs == 0) return 0.0;
  const double b = 1.0 - static_cast<double>(epoch) / static_cast<double>(decay_epochs);
  return b > 0.0 ? b : 0.0;
}

/// Sum over (positive, corruption) pairs of max(0, margin + g- - g+).
/// `neg` holds `neg.size() / pos.size()` corruptions per positive, grouped.
inline double pairwise_loss(std::span<const double> pos, std::span<const double> neg,
                            double margin) {
  if (pos.empty()) {
    if (!neg.empty()) fail(ErrorKind::kInvalidArgument, "corruptions without positives");
    return 0.0;
  }
  if (neg.size() % pos.size() != 0 || neg.empty())
    fail(ErrorKind::kInvalidArgument,
         "corruption count must be a positive multiple of the positive count");
  const std::size_t eta = neg.size() / pos.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < eta; ++j)
      loss += std::max(0.0, margin + neg[i * eta + j] - pos[i]);
  return loss;
}

inline double abs_pow(double x, int p) {
  const double a = std::abs(x);
  switch (p) {
    case 1: return a;
    case 2: return a * a;
    case 3: return a * a * a;
    case 4: { const double s = a * a; return s * s; }
    default: return std::pow(a, p);
  }
}

/// d/dx |x|^p
inline double abs_pow_grad(double x, int p) {
  if (p == 1) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  if (p == 2) return 2.0 * x;
  if (p == 4) return 4.0 * x * x * x;
  const double a = std::abs(x);
  const double g = p * std::pow(a, p - 1);
  return x < 0.0 ? -g : g;
}

inline double lp_regularizer(std::span<const double> components, int p,
                             double lambda) {
  require(p >= 1, "regularizer norm must be at least 1");
  if (lambda == 0.0) return 0.0;
  double s = 0.0;
  for (double x : components) s += abs_pow(x, p);
  return lambda * s;
}

struct CorruptionResult {
  std::vector<IndexedTriple> negatives;  // eta per positive, grouped
  std::size_t self_collisions_kept = 0;
};

/// Replaces subject or object (fair coin) of each positive with an entity
/// drawn uniformly from the pool. Only corruptions equal to their own
/// positive are redrawn (up to 100 times); collisions with other true
/// triples are allowed.
inline CorruptionResult sample_corruptions(std::span<const IndexedTriple> batch,
                                           std::size_t eta, CorruptionMode mode,
                                           std::size_t num_entities, Rng& rng) {
  require(eta >= 1, "eta must be at least 1");
  std::vector<std::uint32_t> pool;
  if (mode == CorruptionMode::kBatch) {
    for (const auto& t : batch) {
      pool.push_back(t.s);
      pool.push_back(t.o);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  const std::size_t pool_size = mode == CorruptionMode::kBatch ? pool.size() : num_entities;
  if (pool_size < 2)
    fail(ErrorKind::kInvalidArgument, "entity pool of size < 2 cannot produce corruptions");
  auto draw = [&]() -> std::uint32_t {
    const auto i = static_cast<std::uint32_t>(uniform_index(rng, pool_size));
    return mode == CorruptionMode::kBatch ? pool[i] : i;
  };

  CorruptionResult out;
  out.negatives.reserve(batch.size() * eta);
  for (const auto& t : batch) {
    for (std::size_t j = 0; j < eta; ++j) {
      const bool replace_subject = (rng() >> 63) != 0;
      IndexedTriple c = t;
      for (int attempt = 0; attempt < 100; ++attempt) {
        (replace_subject ? c.s : c.o) = draw();
        if (c.s != t.s || c.o != t.o) break;
      }
      if (c.s == t.s && c.o == t.o) ++out.self_collisions_kept;
      out.negatives.push_back(c);
    }
  }
  return out;
}

/// Gradient buffers shaped like a model. Only rows listed in the touched
/// sets can be non-zero.
struct Gradient {
  Matrix ent_re;
  Matrix ent_im;
  Matrix rel_re;
  Matrix rel_im;
  std::vector<std::uint32_t> touched_entities;
  std::vector<std::uint32_t> touched_relations;

  Gradient() = default;
  explicit Gradient(const ModelParams& m)
      : ent_re(m.num_entities(), m.k),
        ent_im(m.num_entities(), m.k),
        rel_re(m.num_relations(), m.k),
        rel_im(m.num_relations(), m.k) {}

  void clear() {
    for (auto e : touched_entities) {
      std::fill(ent_re.row(e).begin(), ent_re.row(e).end(), 0.0);
      std::fill(ent_im.row(e).begin(), ent_im.row(e).end(), 0.0);
    }
    for (auto r : touched_relations) {
      std::fill(rel_re.row(r).begin(), rel_re.row(r).end(), 0.0);
      std::fill(rel_im.row(r).begin(), rel_im.row(r).end(), 0.0);
    }
    touched_entities.clear();
    touched_relations.clear();
  }
};

struct ObjectiveSettings {
  double margin = 0.5;
  double beta = 1.0;
  int reg_p = 4;
  double reg_lambda = 1e-4;
  std::size_t num_threads = 1;
};

namespace detail {

inline void accumulate_score_grad(const ModelParams& m, Gradient& g,
                                  const IndexedTriple& t, double coef) {
  const std::size_t k = m.k;
  const double* a = m.ent_re.data.data() + t.s * k;
  const double* b = m.ent_im.data.data() + t.s * k;
  const double* c = m.rel_re.data.data() + t.p * k;
  const double* d = m.rel_im.data.data() + t.p * k;
  const double* x = m.ent_re.data.data() + t.o * k;
  const double* y = m.ent_im.data.data() + t.o * k;
  double* ga = g.ent_re.data.data() + t.s * k;
  double* gb = g.ent_im.data.data() + t.s * k;
  double* gc = g.rel_re.data.data() + t.p * k;
  double* gd = g.rel_im.data.data() + t.p * k;
  double* gx = g.ent_re.data.data() + t.o * k;
  double* gy = g.ent_im.data.data() + t.o * k;
  for (std::size_t j = 0; j < k; ++j) {
    const double da = c[j] * x[j] + d[j] * y[j];
    const double db = c[j] * y[j] - d[j] * x[j];
    const double dc = a[j] * x[j] + b[j] * y[j];
    const double dd = a[j] * y[j] - b[j] * x[j];
    const double dx = a[j] * c[j] - b[j] * d[j];
    const double dy = a[j] * d[j] + b[j] * c[j];
    ga[j] += coef * da;
    gb[j] += coef * db;
    gc[j] += coef * dc;
    gd[j] += coef * dd;
    gx[j] += coef * dx;
    gy[j] += coef * dy;
  }
}

struct PositiveTerms {
  double loss = 0.0;
  double pos_coef = 0.0;  // dL/df for the positive
};

// Hinge terms of one positive and its corruptions; fills neg_coef[0..eta).
inline PositiveTerms positive_terms(const ModelParams& m, const IndexedTriple& pos,
                                    std::span<const IndexedTriple> negs,
                                    const ObjectiveSettings& s, double* neg_coef) {
  PositiveTerms out;
  const double f_pos = complex_score_unchecked(m, pos.s, pos.p, pos.o);
  const double a_pos = focuse_alpha(pos.w, s.beta, true);
  const double a_neg = focuse_alpha(pos.w, s.beta, false);
  const double g_pos = a_pos * softplus(f_pos);
  const double dg_pos = a_pos * sigmoid(f_pos);
  for (std::size_t j = 0; j < negs.size(); ++j) {
    const auto& n = negs[j];
    const double f_neg = complex_score_unchecked(m, n.s, n.p, n.o);
    const double h = s.margin + a_neg * softplus(f_neg) - g_pos;
    if (h > 0.0) {
      out.loss += h;
      out.pos_coef -= dg_pos;
      neg_coef[j] = a_neg * sigmoid(f_neg);
    } else {
      neg_coef[j] = 0.0;
    }
  }
  return out;
}

}  // namespace detail

/// Batch objective: FocusE-modulated pairwise hinge loss plus the Lp
/// penalty on every embedding row the batch references. When `grad` is
/// given it receives the exact gradient (hinge subgradient 0 at the kink).
/// Per-positive terms may be computed on several threads; the reduction
/// order is fixed, so the result does not depend on the thread count.
inline double batch_objective(const ModelParams& m,
                              std::span<const IndexedTriple> pos,
                              std::span<const IndexedTriple> neg,
                              const ObjectiveSettings& s, Gradient* grad) {
  if (pos.empty()) return 0.0;
  if (neg.size() % pos.size() != 0 || neg.empty())
    fail(ErrorKind::kInvalidArgument,
         "corruption count must be a positive multiple of the positive count");
  const std::size_t eta = neg.size() / pos.size();
  std::vector<detail::PositiveTerms> terms(pos.size());
  std::vector<double> neg_coef(neg.size(), 0.0);

  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      terms[i] = detail::positive_terms(m, pos[i], neg.subspan(i * eta, eta), s,
                                        neg_coef.data() + i * eta);
  };
  const std::size_t threads = std::min(s.num_threads, pos.size());
  if (threads <= 1) {
    work(0, pos.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (pos.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(pos.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double loss = 0.0;
  for (const auto& t : terms) loss += t.loss;

  std::vector<std::uint32_t> ents;
  std::vector<std::uint32_t> rels;
  ents.reserve(2 * (pos.size() + neg.size()));
  for (auto span : {pos, neg}) {
    for (const auto& t : span) {
      ents.push_back(t.s);
      ents.push_back(t.o);
      rels.push_back(t.p);
    }
  }
  std::sort(ents.begin(), ents.end());
  ents.erase(std::unique(ents.begin(), ents.end()), ents.end());
  std::sort(rels.begin(), rels.end());
  rels.erase(std::unique(rels.begin(), rels.end()), rels.end());

  double reg = 0.0;
  if (s.reg_lambda != 0.0) {
    for (auto e : ents) {
      reg += lp_regularizer(m.ent_re.row(e), s.reg_p, 1.0);
      reg += lp_regularizer(m.ent_im.row(e), s.reg_p, 1.0);
    }
    for (auto r : rels) {
      reg += lp_regularizer(m.rel_re.row(r), s.reg_p, 1.0);
      reg += lp_regularizer(m.rel_im.row(r), s.reg_p, 1.0);
    }
    loss += s.reg_lambda * reg;
  }

  if (grad != nullptr) {
    Gradient& g = *grad;
    g.clear();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (terms[i].pos_coef != 0.0)
        detail::accumulate_score_grad(m, g, pos[i], terms[i].pos_coef);
      for (std::size_t j = 0; j < eta; ++j)
        if (neg_coef[i * eta + j] != 0.0)
          detail::accumulate_score_grad(m, g, neg[i * eta + j], neg_coef[i * eta + j]);
    }
    if (s.reg_lambda != 0.0) {
      auto add_reg = [&](const Matrix& param, Matrix& out, std::uint32_t row) {
        auto p = param.row(row);
        auto o = out.row(row);
        for (std::size_t j = 0; j < p.size(); ++j)
          o[j] += s.reg_lambda * abs_pow_grad(p[j], s.reg_p);
      };
      for (auto e : ents) {
        add_reg(m.ent_re, g.ent_re, e);
        add_reg(m.ent_im, g.ent_im, e);
      }
      for (auto r : rels) {
        add_reg(m.rel_re, g.rel_re, r);
        add_reg(m.rel_im, g.rel_im, r);
      }
    }
    g.touched_entities = std::move(ents);
    g.touched_relations = std::move(rels);
  }
  return loss;
}

struct LossAndGradient {
  double loss = 0.0;
  Gradient gradient;
};

/// Loss and exact gradient of one batch (positives plus their corruptions).
inline LossAndGradient gradient_of_loss(const ModelParams& m,
                                        std::span<const IndexedTriple> pos,
                                        std::span<const IndexedTriple> neg,
                                        const ObjectiveSettings& s) {
  LossAndGradient out{0.0, Gradient(m)};
  out.loss = batch_objective(m, pos, neg, s, &out.gradient);
  return out;
}

}  // namespace qakge
