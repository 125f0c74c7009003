/*
 * Copyright 2026 The EDNA Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "edna/covid/stats.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

#include "edna/common/error.hpp"
#include "edna/covid/store.hpp"
#include "edna/covid/tweet.hpp"

namespace edna::covid {
namespace {

std::uint64_t parse_count(const std::string& s, std::size_t row) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    raise(ErrorCode::kParse, "row " + std::to_string(row) + ": bad count '" + s + "'");
  }
  return v;
}

std::size_t column(const Table& t, std::string_view name) {
  auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) raise(ErrorCode::kParse, "missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - t.columns.begin());
}

}  // namespace

Table MonthlyCounts::table() const {
  Table t;
  t.columns = {"month", "count"};
  for (const auto& [m, n] : counts_) t.rows.push_back({m, std::to_string(n)});
  return t;
}

std::uint64_t MonthlyCounts::total() const {
  std::uint64_t s = 0;
  for (const auto& [m, n] : counts_) s += n;
  return s;
}

Table LanguageCounts::table() const {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts_.begin(), counts_.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::uint64_t sum = total();
  Table t;
  t.columns = {"lang", "count", "pct"};
  for (const auto& [lang, n] : rows) t.rows.push_back({lang, std::to_string(n), format_percent(n, sum)});
  return t;
}

std::uint64_t LanguageCounts::total() const {
  std::uint64_t s = 0;
  for (const auto& [l, n] : counts_) s += n;
  return s;
}

std::string format_percent(std::uint64_t count, std::uint64_t total) {
  if (total == 0) return "0.0";
  // tenths of a percent, half up, in integers
  unsigned __int128 tenths = (static_cast<unsigned __int128>(count) * 2000 + total) / (2 * static_cast<unsigned __int128>(total));
  auto v = static_cast<std::uint64_t>(tenths);
  return std::to_string(v / 10) + "." + std::to_string(v % 10);
}

std::string format_thousands(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

MonthlyCounts monthly_counts(runtime::KeyedStore& store) {
  MonthlyCounts m;
  store.for_each(kTweetsCollection, [&](const std::string& key, const nlohmann::json& doc) {
    auto it = doc.find("created_at");
    std::optional<Timestamp> t;
    if (it != doc.end() && it->is_string()) t = parse_iso8601(it->get<std::string>());
    if (!t) raise(ErrorCode::kParse, "tweet " + key + " has no valid created_at");
    m.add(*t);
  });
  return m;
}

LanguageCounts language_counts(runtime::KeyedStore& store) {
  LanguageCounts l;
  store.for_each(kTweetsCollection, [&](const std::string&, const nlohmann::json& doc) {
    auto it = doc.find("lang");
    l.add(it != doc.end() && it->is_string() ? normalize_language(it->get<std::string>()) : "und");
  });
  return l;
}

MonthlyCounts monthly_counts_from_fixture(std::string_view csv_text) {
  Table t = parse_csv(csv_text);
  std::size_t tc = column(t, "created_at"), cc = column(t, "count");
  MonthlyCounts m;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    auto ts = parse_iso8601(t.rows[i].at(tc));
    if (!ts) raise(ErrorCode::kParse, "row " + std::to_string(i + 1) + ": bad created_at");
    m.add(*ts, parse_count(t.rows[i].at(cc), i + 1));
  }
  return m;
}

LanguageCounts language_counts_from_fixture(std::string_view csv_text) {
  Table t = parse_csv(csv_text);
  std::size_t lc = column(t, "lang"), cc = column(t, "count");
  LanguageCounts l;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    l.add(normalize_language(t.rows[i].at(lc)), parse_count(t.rows[i].at(cc), i + 1));
  }
  return l;
}

}  // namespace edna::covid
