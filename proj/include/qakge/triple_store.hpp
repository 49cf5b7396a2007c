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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/csv.hpp"

namespace qakge {

struct WeightedTriple {
  std::string source;
  std::string relation;
  std::string target;
  double weight = 1.0;

  friend bool operator==(const WeightedTriple&, const WeightedTriple&) = default;
};

/// A triple resolved against a Vocabulary.
struct IndexedTriple {
  std::uint32_t s = 0;
  std::uint32_t p = 0;
  std::uint32_t o = 0;
  double w = 1.0;
};

struct TripleKey {
  std::uint32_t s = 0;
  std::uint32_t p = 0;
  std::uint32_t o = 0;

  friend bool operator==(const TripleKey&, const TripleKey&) = default;
};

struct TripleKeyHash {
  std::size_t operator()(const TripleKey& k) const noexcept {
    std::uint64_t h = k.s;
    h = h * 0x9E3779B97F4A7C15ULL ^ k.p;
    h = h * 0x9E3779B97F4A7C15ULL ^ k.o;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

using TripleKeySet = std::unordered_set<TripleKey, TripleKeyHash>;

/// Entity and relation name tables. Both are kept in lexicographic order so
/// that index assignment is independent of ingestion order.
class Vocabulary {
 public:
  Vocabulary() = default;

  Vocabulary(std::vector<std::string> entities,
             std::vector<std::string> relations)
      : entities_(sorted_unique(std::move(entities))),
        relations_(sorted_unique(std::move(relations))) {
    for (std::size_t i = 0; i < entities_.size(); ++i)
      entity_index_.emplace(entities_[i], static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < relations_.size(); ++i)
      relation_index_.emplace(relations_[i], static_cast<std::uint32_t>(i));
  }

  static Vocabulary from_triples(std::span<const WeightedTriple> triples) {
    std::vector<std::string> ents;
    std::vector<std::string> rels;
    ents.reserve(triples.size() * 2);
    rels.reserve(triples.size());
    for (const auto& t : triples) {
      ents.push_back(t.source);
      ents.push_back(t.target);
      rels.push_back(t.relation);
    }
    return Vocabulary(std::move(ents), std::move(rels));
  }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_relations() const { return relations_.size(); }
  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<std::string>& relations() const { return relations_; }
  const std::string& entity(std::size_t i) const { return entities_.at(i); }
  const std::string& relation(std::size_t i) const { return relations_.at(i); }

  std::optional<std::uint32_t> find_entity(std::string_view name) const {
    auto it = entity_index_.find(std::string(name));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::uint32_t> find_relation(std::string_view name) const {
    auto it = relation_index_.find(std::string(name));
    if (it == relation_index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t entity_index(std::string_view name) const {
    auto i = find_entity(name);
    if (!i) fail(ErrorKind::kNotFound, "unknown entity '" + std::string(name) + "'");
    return *i;
  }
  std::uint32_t relation_index(std::string_view name) const {
    auto i = find_relation(name);
    if (!i) fail(ErrorKind::kNotFound, "unknown relation '" + std::string(name) + "'");
    return *i;
  }

  /// Content hash used to detect a checkpoint applied to a foreign graph.
  std::uint64_t hash() const {
    Fnv1a h;
    for (const auto& e : entities_) {
      h.update(e);
      h.update("\x1f", 1);
    }
    h.update("\x1e", 1);
    for (const auto& r : relations_) {
      h.update(r);
      h.update("\x1f", 1);
    }
    return h.digest();
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entities_ == b.entities_ && a.relations_ == b.relations_;
  }

 private:
  static std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::unordered_map<std::string, std::uint32_t> relation_index_;
};

/// Immutable weighted triple graph. Keys (source, relation, target) are
/// unique; re-ingesting a key keeps its first position and the last weight.
class TripleGraph {
 public:
  TripleGraph() = default;

  explicit TripleGraph(std::vector<WeightedTriple> triples) {
    std::unordered_map<std::string, std::size_t> position;
    triples_.reserve(triples.size());
    for (auto& t : triples) {
      validate(t);
      std::string key = t.source + '\x1f' + t.relation + '\x1f' + t.target;
      auto [it, inserted] = position.emplace(std::move(key), triples_.size());
      if (inserted) {
        triples_.push_back(std::move(t));
      } else {
        triples_[it->second].weight = t.weight;
      }
    }
    vocab_ = Vocabulary::from_triples(triples_);
    indexed_.reserve(triples_.size());
    keys_.reserve(triples_.size());
    for (const auto& t : triples_) {
      IndexedTriple it{vocab_.entity_index(t.source),
                       vocab_.relation_index(t.relation),
                       vocab_.entity_index(t.target), t.weight};
      indexed_.push_back(it);
      keys_.insert(TripleKey{it.s, it.p, it.o});
    }
  }

  static void validate(const WeightedTriple& t) {
    if (t.source.empty() || t.relation.empty() || t.target.empty())
      fail(ErrorKind::kInvalidArgument, "triple has an empty name");
    if (!(t.weight >= 0.0 && t.weight <= 1.0))
      fail(ErrorKind::kInvalidArgument,
           "triple weight outside [0,1] for (" + t.source + ", " + t.relation +
               ", " + t.target + ")");
  }

  const std::vector<WeightedTriple>& triples() const { return triples_; }
  /// Triples resolved against this graph's own vocabulary, same order.
  const std::vector<IndexedTriple>& indexed() const { return indexed_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  bool contains(std::string_view s, std::string_view p,
                std::string_view o) const {
    auto si = vocab_.find_entity(s);
    auto pi = vocab_.find_relation(p);
    auto oi = vocab_.find_entity(o);
    if (!si || !pi || !oi) return false;
    return keys_.contains(TripleKey{*si, *pi, *oi});
  }

  /// Resolves every triple against another vocabulary (e.g. a model's).
  std::vector<IndexedTriple> indexed_against(const Vocabulary& v) const {
    std::vector<IndexedTriple> out;
    out.reserve(triples_.size());
    for (const auto& t : triples_)
      out.push_back({v.entity_index(t.source), v.relation_index(t.relation),
                     v.entity_index(t.target), t.weight});
    return out;
  }

  /// Graph with this graph's triples followed by `extra` (last weight wins).
  TripleGraph merged_with(std::span<const WeightedTriple> extra) const {
    std::vector<WeightedTriple> all = triples_;
    all.insert(all.end(), extra.begin(), extra.end());
    return TripleGraph(std::move(all));
  }

 private:
  std::vector<WeightedTriple> triples_;
  std::vector<IndexedTriple> indexed_;
  Vocabulary vocab_;
  TripleKeySet keys_;
};

inline constexpr std::string_view kTripleCsvHeader = "source,relation,target,weight";

struct CsvLoadOptions {
  /// Weights are percentages in [0,100] and are divided by 100.
  bool percent = false;
};

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::vector<WeightedTriple> read_triples_csv(
    const std::filesystem::path& path, const CsvLoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open triple file " + path.string());
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::kParse, path.string() + ": missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTripleCsvHeader)
    fail(ErrorKind::kParse, path.string() + ": header must be '" +
                                std::string(kTripleCsvHeader) + "'");
  std::vector<WeightedTriple> triples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto fields = csv::split_line(line);
    if (!fields || fields->size() != 4)
      fail(ErrorKind::kParse, where + ": expected 4 columns");
    auto& f = *fields;
    if (f[0].empty() || f[1].empty() || f[2].empty())
      fail(ErrorKind::kParse, where + ": empty source, relation or target");
    double w = 1.0;
    if (!f[3].empty()) {
      auto parsed = parse_double(f[3]);
      if (!parsed) fail(ErrorKind::kParse, where + ": weight '" + f[3] + "' is not a number");
      w = opts.percent ? *parsed / 100.0 : *parsed;
      if (w < 0.0 || w > 1.0)
        fail(ErrorKind::kParse, where + ": weight " + f[3] + " outside [0,1]");
    }
    triples.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2]), w});
  }
  return triples;
}

inline TripleGraph load_triples_csv(const std::filesystem::path& path,
                                    const CsvLoadOptions& opts = {}) {
  return TripleGraph(read_triples_csv(path, opts));
}

inline void save_triples_csv(const TripleGraph& graph,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << kTripleCsvHeader << '\n';
  for (const auto& t : graph.triples()) {
    out << csv::escape(t.source) << ',' << csv::escape(t.relation) << ','
        << csv::escape(t.target) << ',' << format_double(t.weight) << '\n';
  }
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

struct TrainTestSplit {
  TripleGraph train;
  TripleGraph test;
  /// Test size before unseen-symbol repair.
  std::size_t initial_test_size = 0;
};

/// Seeded random split. Test triples mentioning an entity or relation that is
/// absent from the training part are moved back into training.
inline TrainTestSplit split_train_test(const TripleGraph& graph,
                                       double test_fraction,
                                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    fail(ErrorKind::kInvalidArgument, "test fraction must lie in (0,1)");
  const std::size_t n = graph.size();
  if (n < 5) fail(ErrorKind::kInvalidArgument, "split needs at least 5 triples");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  const auto n_test = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * test_fraction + 1e-9));
  std::vector<char> in_test(n, 0);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = 1;

  const auto& idx = graph.indexed();
  std::vector<std::size_t> ent_count(graph.vocab().num_entities(), 0);
  std::vector<std::size_t> rel_count(graph.vocab().num_relations(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_test[i]) continue;
    ++ent_count[idx[i].s];
    ++ent_count[idx[i].o];
    ++rel_count[idx[i].p];
  }
  for (std::size_t k = 0; k < n_test; ++k) {
    const std::size_t i = order[k];
    const auto& t = idx[i];
    if (ent_count[t.s] == 0 || ent_count[t.o] == 0 || rel_count[t.p] == 0) {
      in_test[i] = 0;
      ++ent_count[t.s];
      ++ent_count[t.o];
      ++rel_count[t.p];
    }
  }

  std::vector<WeightedTriple> train;
  std::vector<WeightedTriple> test;
  for (std::size_t i = 0; i < n; ++i)
    (in_test[i] ? test : train).push_back(graph.triples()[i]);
  return {TripleGraph(std::move(train)), TripleGraph(std::move(test)), n_test};
}

}  // namespace qakge
