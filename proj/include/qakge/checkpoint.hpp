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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/kge_model.hpp"

namespace qakge {

// Layout (all integers little-endian):
//   "QAKGE1" | u16 version | u64 k | u64 n | u64 m
//   n entity names, m relation names, each u32 byte length + UTF-8 bytes
//   entity-real, entity-imag (n*k f64), relation-real, relation-imag (m*k f64)
//   u64 FNV-1a of every preceding byte
inline constexpr char kCheckpointMagic[6] = {'Q', 'A', 'K', 'G', 'E', '1'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  template <typename T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    uint(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<unsigned char>& b, std::size_t end)
      : bytes_(b), end_(end) {}

  void need(std::size_t n) const {
    if (end_ - pos_ < n) fail(ErrorKind::kFormat, "checkpoint is truncated");
  }
  template <typename T>
  T uint() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<T>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::string str() {
    const auto n = uint<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> serialize_checkpoint(const ModelParams& m) {
  detail::ByteWriter w;
  w.raw(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.uint(kCheckpointVersion);
  w.uint(static_cast<std::uint64_t>(m.k));
  w.uint(static_cast<std::uint64_t>(m.vocab.num_entities()));
  w.uint(static_cast<std::uint64_t>(m.vocab.num_relations()));
  for (const auto& e : m.vocab.entities()) w.str(e);
  for (const auto& r : m.vocab.relations()) w.str(r);
  for (const Matrix* mat : {&m.ent_re, &m.ent_im, &m.rel_re, &m.rel_im})
    for (double x : mat->data) w.f64(x);
  Fnv1a h;
  h.update(w.bytes().data(), w.bytes().size());
  w.uint(h.digest());
  return w.bytes();
}

inline ModelParams deserialize_checkpoint(const std::vector<unsigned char>& bytes) {
  constexpr std::size_t kHeader = sizeof(kCheckpointMagic) + 2;
  if (bytes.size() < kHeader ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
    fail(ErrorKind::kFormat, "checkpoint magic/version mismatch: not a QAKGE1 file");
  const auto version = static_cast<std::uint16_t>(bytes[6] | (bytes[7] << 8));
  if (version != kCheckpointVersion)
    fail(ErrorKind::kFormat, "checkpoint magic/version mismatch: version " +
                                 std::to_string(version) + " unsupported");
  if (bytes.size() < kHeader + 8)
    fail(ErrorKind::kFormat, "checkpoint is truncated");

  const std::size_t body = bytes.size() - 8;
  detail::ByteReader r(bytes, body);
  r.skip(kHeader);
  const auto k = r.uint<std::uint64_t>();
  const auto n = r.uint<std::uint64_t>();
  const auto m_rel = r.uint<std::uint64_t>();
  if (k == 0 || n > body || m_rel > body || k > body)
    fail(ErrorKind::kFormat, "checkpoint header holds implausible sizes");
  std::vector<std::string> ents;
  std::vector<std::string> rels;
  ents.reserve(n);
  rels.reserve(m_rel);
  for (std::uint64_t i = 0; i < n; ++i) ents.push_back(r.str());
  for (std::uint64_t i = 0; i < m_rel; ++i) rels.push_back(r.str());
  r.need(8 * k * (2 * n + 2 * m_rel));

  ModelParams m;
  m.vocab = Vocabulary(ents, rels);
  if (m.vocab.entities() != ents || m.vocab.relations() != rels)
    fail(ErrorKind::kFormat, "checkpoint vocabulary is not sorted and unique");
  m.k = k;
  m.ent_re = Matrix(n, k);
  m.ent_im = Matrix(n, k);
  m.rel_re = Matrix(m_rel, k);
  m.rel_im = Matrix(m_rel, k);
  for (Matrix* mat : {&m.ent_re, &m.ent_im, &m.rel_re, &m.rel_im})
    for (double& x : mat->data) x = r.f64();
  if (r.pos() != body) fail(ErrorKind::kFormat, "checkpoint has trailing bytes");

  Fnv1a h;
  h.update(bytes.data(), body);
  detail::ByteReader tail(bytes, bytes.size());
  tail.skip(body);
  if (tail.uint<std::uint64_t>() != h.digest())
    fail(ErrorKind::kFormat, "checkpoint checksum mismatch");
  return m;
}

inline void save_checkpoint(const ModelParams& m, const std::filesystem::path& path) {
  const auto bytes = serialize_checkpoint(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

inline ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open checkpoint " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

/// Rejects a model whose vocabulary differs from the graph it is applied to.
inline void check_vocab_compatible(const ModelParams& m, const Vocabulary& vocab) {
  if (m.vocab.hash() != vocab.hash() || !(m.vocab == vocab))
    fail(ErrorKind::kFormat,
         "vocab hash mismatch: checkpoint was trained on a different graph");
}

}  // namespace qakge
