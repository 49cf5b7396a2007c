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
#include <vector>

#include "json.hpp"
#include "qakge/common.hpp"
#include "qakge/kge_model.hpp"
#include "qakge/kge_train.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

/// Candidate values per hyperparameter. An empty list keeps the base value.
struct HyperparamGrid {
  std::vector<std::size_t> k;
  std::vector<std::size_t> eta;
  std::vector<std::size_t> batch_size;
  std::vector<double> learning_rate;
  std::vector<double> margin;
  std::vector<CorruptionMode> corruption_mode;
  std::vector<double> reg_lambda;

  bool empty() const {
    return k.empty() && eta.empty() && batch_size.empty() && learning_rate.empty() &&
           margin.empty() && corruption_mode.empty() && reg_lambda.empty();
  }
};

/// Cartesian product in field order; the last field varies fastest.
inline std::vector<Hyperparams> expand_grid(const HyperparamGrid& grid,
                                            const Hyperparams& base) {
  if (grid.empty()) fail(ErrorKind::kInvalidArgument, "hyperparameter grid is empty");
  std::vector<Hyperparams> combos = {base};
  auto expand = [&combos](const auto& values, auto setter) {
    if (values.empty()) return;
    std::vector<Hyperparams> next;
    next.reserve(combos.size() * values.size());
    for (const auto& hp : combos) {
      for (const auto& v : values) {
        Hyperparams h = hp;
        setter(h, v);
        next.push_back(h);
      }
    }
    combos = std::move(next);
  };
  expand(grid.k, [](Hyperparams& h, std::size_t v) { h.k = v; });
  expand(grid.eta, [](Hyperparams& h, std::size_t v) { h.eta = v; });
  expand(grid.batch_size, [](Hyperparams& h, std::size_t v) { h.batch_size = v; });
  expand(grid.learning_rate, [](Hyperparams& h, double v) { h.learning_rate = v; });
  expand(grid.margin, [](Hyperparams& h, double v) { h.margin = v; });
  expand(grid.corruption_mode, [](Hyperparams& h, CorruptionMode v) { h.corruption_mode = v; });
  expand(grid.reg_lambda, [](Hyperparams& h, double v) { h.reg_lambda = v; });
  return combos;
}

struct LeaderboardRow {
  std::size_t combination = 0;  // position in enumeration order
  Hyperparams hp;
  double validation_loss = 0.0;  // +inf when training diverged
};

struct GridSearchResult {
  Hyperparams best;
  std::vector<LeaderboardRow> leaderboard;  // ascending validation loss
};

/// Trains every combination for `budget_epochs` and ranks by validation
/// loss. Ties keep enumeration order.
inline GridSearchResult grid_search(const TripleGraph& train_graph,
                                    const TripleGraph& valid_graph,
                                    const HyperparamGrid& grid, const Hyperparams& base,
                                    std::size_t budget_epochs) {
  require(budget_epochs >= 1, "budget_epochs must be at least 1");
  auto combos = expand_grid(grid, base);
  GridSearchResult out;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    Hyperparams hp = combos[i];
    hp.epochs = budget_epochs;
    hp.beta_decay_epochs = 0;
    validate(hp);
    double loss = std::numeric_limits<double>::infinity();
    try {
      auto result = train(train_graph, hp);
      loss = evaluate_loss(result.model, valid_graph, hp, result.report.final_beta, hp.seed);
      if (!std::isfinite(loss)) loss = std::numeric_limits<double>::infinity();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNumeric) throw;
    }
    out.leaderboard.push_back({i, hp, loss});
  }
  std::stable_sort(out.leaderboard.begin(), out.leaderboard.end(),
                   [](const auto& a, const auto& b) { return a.validation_loss < b.validation_loss; });
  out.best = out.leaderboard.front().hp;
  return out;
}

inline nlohmann::json hyperparams_to_json(const Hyperparams& hp) {
  return {{"k", hp.k},
          {"eta", hp.eta},
          {"batch_size", hp.batch_size},
          {"learning_rate", hp.learning_rate},
          {"margin", hp.margin},
          {"epochs", hp.epochs},
          {"corruption_mode", std::string(to_string(hp.corruption_mode))},
          {"reg_p", hp.reg_p},
          {"reg_lambda", hp.reg_lambda},
          {"beta_decay_epochs", hp.decay_epochs()},
          {"fixed_beta", hp.fixed_beta ? nlohmann::json(*hp.fixed_beta) : nlohmann::json(nullptr)},
          {"seed", hp.seed},
          {"adam_beta1", hp.adam_beta1},
          {"adam_beta2", hp.adam_beta2},
          {"adam_eps", hp.adam_eps},
          {"num_threads", hp.num_threads}};
}

inline nlohmann::json leaderboard_to_json(const GridSearchResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t rank = 0; rank < r.leaderboard.size(); ++rank) {
    const auto& row = r.leaderboard[rank];
    rows.push_back({{"rank", rank + 1},
                    {"combination", row.combination},
                    {"validation_loss", std::isfinite(row.validation_loss)
                                            ? nlohmann::json(row.validation_loss)
                                            : nlohmann::json(nullptr)},
                    {"hyperparams", hyperparams_to_json(row.hp)}});
  }
  return {{"best", hyperparams_to_json(r.best)}, {"leaderboard", rows}};
}

}  // namespace qakge
