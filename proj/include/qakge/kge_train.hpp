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

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

/// Adam with bias correction. Moments are dense; every parameter is
/// updated on every step, untouched rows with a zero gradient.
class AdamOptimizer {
 public:
  AdamOptimizer(const ModelParams& m, double lr, double beta1, double beta2, double eps)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (int i = 0; i < 4; ++i) {
      const Matrix& p = i < 2 ? (i == 0 ? m.ent_re : m.ent_im) : (i == 2 ? m.rel_re : m.rel_im);
      first_[i] = Matrix(p.rows, p.cols);
      second_[i] = Matrix(p.rows, p.cols);
    }
  }

  void step(ModelParams& m, const Gradient& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    Matrix* params[4] = {&m.ent_re, &m.ent_im, &m.rel_re, &m.rel_im};
    const Matrix* grads[4] = {&g.ent_re, &g.ent_im, &g.rel_re, &g.rel_im};
    for (int i = 0; i < 4; ++i) {
      double* p = params[i]->data.data();
      const double* gr = grads[i]->data.data();
      double* m1 = first_[i].data.data();
      double* m2 = second_[i].data.data();
      const std::size_t n = params[i]->data.size();
      for (std::size_t j = 0; j < n; ++j) {
        m1[j] = beta1_ * m1[j] + (1.0 - beta1_) * gr[j];
        m2[j] = beta2_ * m2[j] + (1.0 - beta2_) * gr[j] * gr[j];
        const double mhat = m1[j] / c1;
        const double vhat = m2[j] / c2;
        p[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  std::uint64_t steps() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  std::uint64_t t_ = 0;
  Matrix first_[4];
  Matrix second_[4];
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean batch objective per epoch
  double wall_seconds = 0.0;
  double final_beta = 1.0;
  std::uint64_t seed = 0;
  std::size_t self_collisions_kept = 0;
};

struct TrainResult {
  ModelParams model;
  TrainReport report;
};

/// Copies rows of `from` into `to` wherever entity/relation names match.
inline void transfer_embeddings(const ModelParams& from, ModelParams& to) {
  require(from.k == to.k, "warm start needs the same embedding dimension");
  for (std::size_t i = 0; i < to.vocab.num_entities(); ++i) {
    if (auto j = from.vocab.find_entity(to.vocab.entity(i))) {
      std::copy_n(from.ent_re.row(*j).begin(), to.k, to.ent_re.row(i).begin());
      std::copy_n(from.ent_im.row(*j).begin(), to.k, to.ent_im.row(i).begin());
    }
  }
  for (std::size_t i = 0; i < to.vocab.num_relations(); ++i) {
    if (auto j = from.vocab.find_relation(to.vocab.relation(i))) {
      std::copy_n(from.rel_re.row(*j).begin(), to.k, to.rel_re.row(i).begin());
      std::copy_n(from.rel_im.row(*j).begin(), to.k, to.rel_im.row(i).begin());
    }
  }
}

namespace detail {

inline bool finite_rows(const Matrix& m, const std::vector<std::uint32_t>& rows) {
  for (auto r : rows)
    for (double x : m.row(r))
      if (!std::isfinite(x)) return false;
  return true;
}

[[noreturn]] inline void non_finite(std::size_t epoch, std::size_t batch,
                                    std::span<const IndexedTriple> pos,
                                    const Vocabulary& vocab) {
  std::ostringstream msg;
  msg << "non-finite loss at epoch " << epoch << ", batch " << batch
      << "; positives:";
  std::size_t shown = 0;
  for (const auto& t : pos) {
    if (shown++ == 8) {
      msg << " ...";
      break;
    }
    msg << " (" << t.s << ':' << vocab.entity(t.s) << ", " << t.p << ", " << t.o
        << ':' << vocab.entity(t.o) << ')';
  }
  fail(ErrorKind::kNumeric, msg.str());
}

}  // namespace detail

/// Trains ComplEx+FocusE embeddings from scratch (or from `warm_start`,
/// matched by name). Single-threaded runs are bit-reproducible per seed.
inline TrainResult train(const TripleGraph& graph, const Hyperparams& hp,
                         const ModelParams* warm_start = nullptr) {
  validate(hp);
  if (graph.empty()) fail(ErrorKind::kInvalidArgument, "cannot train on an empty graph");
  const auto start = std::chrono::steady_clock::now();

  TrainResult out;
  out.model = init_model(graph.vocab(), hp.k, derive_seed(hp.seed, 0));
  if (warm_start != nullptr) transfer_embeddings(*warm_start, out.model);
  ModelParams& m = out.model;
  AdamOptimizer adam(m, hp.learning_rate, hp.adam_beta1, hp.adam_beta2, hp.adam_eps);
  Gradient grad(m);
  Rng rng(derive_seed(hp.seed, 1));

  const auto& triples = graph.indexed();
  std::vector<std::size_t> order(triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<IndexedTriple> batch;
  batch.reserve(hp.batch_size);

  ObjectiveSettings settings{hp.margin, 1.0, hp.reg_p, hp.reg_lambda, hp.num_threads};
  out.report.seed = hp.seed;
  out.report.epoch_loss.reserve(hp.epochs);
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    settings.beta = hp.fixed_beta ? *hp.fixed_beta : beta_at(epoch, hp.decay_epochs());
    out.report.final_beta = settings.beta;
    shuffle(order, rng);
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t lo = 0; lo < order.size(); lo += hp.batch_size) {
      const std::size_t hi = std::min(order.size(), lo + hp.batch_size);
      batch.clear();
      for (std::size_t i = lo; i < hi; ++i) batch.push_back(triples[order[i]]);
      auto corr = sample_corruptions(batch, hp.eta, hp.corruption_mode,
                                     m.num_entities(), rng);
      out.report.self_collisions_kept += corr.self_collisions_kept;
      const double loss = batch_objective(m, batch, corr.negatives, settings, &grad);
      if (!std::isfinite(loss) || !detail::finite_rows(grad.ent_re, grad.touched_entities) ||
          !detail::finite_rows(grad.ent_im, grad.touched_entities) ||
          !detail::finite_rows(grad.rel_re, grad.touched_relations) ||
          !detail::finite_rows(grad.rel_im, grad.touched_relations))
        detail::non_finite(epoch, n_batches, batch, m.vocab);
      adam.step(m, grad);
      epoch_loss += loss;
      ++n_batches;
    }
    out.report.epoch_loss.push_back(epoch_loss / static_cast<double>(n_batches));
  }
  out.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Mean batch objective over `graph` without updating the model. Graph
/// symbols are resolved against the model's vocabulary.
inline double evaluate_loss(const ModelParams& m, const TripleGraph& graph,
                            const Hyperparams& hp, double beta,
                            std::uint64_t seed) {
  if (graph.empty()) fail(ErrorKind::kInvalidArgument, "loss of an empty graph");
  const auto triples = graph.indexed_against(m.vocab);
  Rng rng(derive_seed(seed, 2));
  const ObjectiveSettings settings{hp.margin, beta, hp.reg_p, hp.reg_lambda, hp.num_threads};
  double total = 0.0;
  std::size_t n_batches = 0;
  for (std::size_t lo = 0; lo < triples.size(); lo += hp.batch_size) {
    const std::size_t hi = std::min(triples.size(), lo + hp.batch_size);
    std::span<const IndexedTriple> batch(triples.data() + lo, hi - lo);
    auto corr = sample_corruptions(batch, hp.eta, hp.corruption_mode, m.num_entities(), rng);
    total += batch_objective(m, batch, corr.negatives, settings, nullptr);
    ++n_batches;
  }
  return total / static_cast<double>(n_batches);
}

}  // namespace qakge
