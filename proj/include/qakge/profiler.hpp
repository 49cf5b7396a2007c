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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qakge/common.hpp"
#include "qakge/context_model.hpp"
#include "qakge/csv.hpp"
#include "qakge/triple_store.hpp"

namespace qakge {

inline constexpr std::size_t kDefaultSampleCap = 10'000;
inline constexpr double kTypeInferenceThreshold = 0.95;

struct TypeInference {
  AttributeType type = AttributeType::kText;
  /// Set when no non-empty value was available; type falls back to text.
  bool all_empty = false;
};

namespace detail {

inline bool all_digits(std::string_view s, std::size_t n) {
  if (s.size() != n) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

inline int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

inline bool valid_ymd(int y, int m, int d) {
  static constexpr int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  (void)y;
  return m >= 1 && m <= 12 && d >= 1 && d <= kDays[m - 1];
}

// YYYY-MM-DD
inline bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!all_digits(s.substr(0, 4), 4) || !all_digits(s.substr(5, 2), 2) ||
      !all_digits(s.substr(8, 2), 2))
    return false;
  return valid_ymd(to_int(s.substr(0, 4)), to_int(s.substr(5, 2)),
                   to_int(s.substr(8, 2)));
}

// HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM]
inline bool is_iso_time(std::string_view s) {
  if (s.size() < 5 || !all_digits(s.substr(0, 2), 2) || s[2] != ':' ||
      !all_digits(s.substr(3, 2), 2))
    return false;
  if (to_int(s.substr(0, 2)) > 23 || to_int(s.substr(3, 2)) > 59) return false;
  std::size_t i = 5;
  if (i < s.size() && s[i] == ':') {
    if (i + 3 > s.size() || !all_digits(s.substr(i + 1, 2), 2)) return false;
    if (to_int(s.substr(i + 1, 2)) > 60) return false;
    i += 3;
    if (i < s.size() && s[i] == '.') {
      ++i;
      const std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == start) return false;
    }
  }
  if (i == s.size()) return true;
  if (s[i] == 'Z') return i + 1 == s.size();
  if (s[i] == '+' || s[i] == '-') {
    auto tz = s.substr(i + 1);
    return (tz.size() == 5 && all_digits(tz.substr(0, 2), 2) && tz[2] == ':' &&
            all_digits(tz.substr(3, 2), 2)) ||
           all_digits(tz, 4) || all_digits(tz, 2);
  }
  return false;
}

// DD/MM/YYYY or MM/DD/YYYY; day/month order is not resolved.
inline bool is_slash_date(std::string_view s) {
  if (s.size() != 10 || s[2] != '/' || s[5] != '/') return false;
  if (!all_digits(s.substr(0, 2), 2) || !all_digits(s.substr(3, 2), 2) ||
      !all_digits(s.substr(6, 4), 4))
    return false;
  const int a = to_int(s.substr(0, 2));
  const int b = to_int(s.substr(3, 2));
  const int y = to_int(s.substr(6, 4));
  return valid_ymd(y, b, a) || valid_ymd(y, a, b);
}

}  // namespace detail

/// True for ISO-8601 dates and date-times and for DD/MM/YYYY or MM/DD/YYYY.
inline bool looks_like_date(std::string_view s) {
  if (detail::is_iso_date(s) || detail::is_slash_date(s)) return true;
  if (s.size() > 11 && (s[10] == 'T' || s[10] == ' '))
    return detail::is_iso_date(s.substr(0, 10)) && detail::is_iso_time(s.substr(11));
  return false;
}

inline bool looks_like_number(std::string_view s) {
  return parse_double(s).has_value();
}

/// Classifies a column from up to `sample_cap` non-empty values. A class
/// wins when at least 95% of the examined values belong to it.
inline TypeInference infer_attribute_type(std::span<const std::string> values,
                                          std::size_t sample_cap = kDefaultSampleCap) {
  require(sample_cap >= 1, "sample_cap must be at least 1");
  std::size_t examined = 0;
  std::size_t numeric = 0;
  std::size_t date = 0;
  for (const auto& v : values) {
    if (examined == sample_cap) break;
    if (v.empty()) continue;
    ++examined;
    if (looks_like_number(v)) {
      ++numeric;
    } else if (looks_like_date(v)) {
      ++date;
    }
  }
  if (examined == 0) return {AttributeType::kText, true};
  const double n = static_cast<double>(examined);
  if (static_cast<double>(numeric) >= kTypeInferenceThreshold * n)
    return {AttributeType::kNumeric, false};
  if (static_cast<double>(date) >= kTypeInferenceThreshold * n)
    return {AttributeType::kDate, false};
  return {AttributeType::kText, false};
}

/// User-supplied values that override inferred ones. Only context_id is
/// mandatory; `attributes` is ignored.
using ProfileOverlay = ContextDescriptor;

struct ProfileOptions {
  char delimiter = ',';
  std::size_t sample_cap = kDefaultSampleCap;
};

struct Profile {
  ContextDescriptor descriptor;
  /// Attributes whose values were all empty (typed text by fallback).
  std::vector<std::string> empty_columns;
  std::uint64_t rows = 0;
};

inline ProfileOverlay overlay_from_json(const nlohmann::json& j) {
  ProfileOverlay o = descriptor_from_json(j, /*require_attributes=*/false);
  require(!o.context_id.empty(), "overlay needs a context_id");
  return o;
}

inline Profile profile_dataset(const std::filesystem::path& data_path,
                               const ProfileOverlay& overlay,
                               const ProfileOptions& opts = {}) {
  require(!overlay.context_id.empty(), "overlay needs a context_id");
  std::ifstream in(data_path);
  if (!in) fail(ErrorKind::kIo, "cannot open data file " + data_path.string());

  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::kParse, data_path.string() + ": missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  auto header = csv::split_line(line, opts.delimiter);
  if (!header) fail(ErrorKind::kParse, data_path.string() + ":1: unterminated quote");
  const std::size_t cols = header->size();

  std::vector<std::vector<std::string>> samples(cols);
  std::uint64_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = csv::split_line(line, opts.delimiter);
    if (!fields || fields->size() != cols)
      fail(ErrorKind::kParse, data_path.string() + ":" + std::to_string(lineno) +
                                  ": expected " + std::to_string(cols) + " columns");
    ++rows;
    for (std::size_t c = 0; c < cols; ++c) {
      auto& f = (*fields)[c];
      if (!f.empty() && samples[c].size() < opts.sample_cap)
        samples[c].push_back(std::move(f));
    }
  }

  Profile out;
  out.rows = rows;
  ContextDescriptor& d = out.descriptor;
  d.context_id = overlay.context_id;
  d.data_type = DataType::kStructured;
  for (std::size_t c = 0; c < cols; ++c) {
    auto inferred = infer_attribute_type(samples[c], opts.sample_cap);
    if (inferred.all_empty) out.empty_columns.push_back((*header)[c]);
    d.attributes.push_back({(*header)[c], inferred.type});
  }
  d.size_bucket = size_bucket_for_rows(rows);
  std::string ext = data_path.extension().string();
  if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  d.file_format = ext;
  d.data_source = data_path.filename().string();

  // overlay precedence
  if (overlay.data_type != DataType::kStructured) d.data_type = overlay.data_type;
  if (!overlay.data_source.empty()) d.data_source = overlay.data_source;
  if (!overlay.size_bucket.empty()) d.size_bucket = overlay.size_bucket;
  if (overlay.analysis_scope) d.analysis_scope = overlay.analysis_scope;
  if (!overlay.domain.empty()) d.domain = overlay.domain;
  if (overlay.content_type) d.content_type = overlay.content_type;
  if (!overlay.file_format.empty()) d.file_format = overlay.file_format;
  if (!overlay.org_standards.empty()) d.org_standards = overlay.org_standards;
  if (!overlay.org_policies.empty()) d.org_policies = overlay.org_policies;
  if (overlay.security_level) d.security_level = overlay.security_level;
  if (overlay.est_resources) d.est_resources = overlay.est_resources;
  if (overlay.est_time) d.est_time = overlay.est_time;

  validate(d);
  return out;
}

}  // namespace qakge
