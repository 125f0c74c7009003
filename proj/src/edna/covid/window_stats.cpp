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

#include "edna/covid/window_stats.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "edna/common/error.hpp"
#include "edna/covid/text.hpp"

namespace edna::covid {

nlohmann::json window_stats_to_json(const WindowStats& s) {
  return {{"window_start", format_iso8601(s.window_start)},
          {"window_end", format_iso8601(s.window_end)},
          {"total", s.total},
          {"per_keyword", s.per_keyword},
          {"fraction", s.fraction}};
}

WindowStats window_stats_from_json(const nlohmann::json& doc) {
  WindowStats s;
  try {
    auto start = parse_iso8601(doc.at("window_start").get<std::string>());
    auto end = parse_iso8601(doc.at("window_end").get<std::string>());
    if (!start || !end) raise(ErrorCode::kParse, "window stats: bad timestamp");
    s.window_start = *start;
    s.window_end = *end;
    s.total = doc.at("total").get<std::uint64_t>();
    s.per_keyword = doc.at("per_keyword").get<std::map<std::string, std::uint64_t>>();
    s.fraction = doc.at("fraction").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kParse, std::string("window stats: ") + e.what());
  }
  return s;
}

TagResult tag_window(Timestamp window_start, Timestamp window_end, std::vector<Tweet> tweets,
                     const KeywordMatcher& misinformation, const KeywordMatcher* tracked) {
  TagResult out;
  if (tweets.empty()) return out;
  WindowStats s;
  s.window_start = window_start;
  s.window_end = window_end;
  s.total = tweets.size();
  for (const auto& k : misinformation.keywords()) s.per_keyword[k] = 0;
  if (tracked) {
    for (const auto& k : tracked->keywords()) s.per_keyword[k] = 0;
  }
  for (auto& t : tweets) {
    std::vector<std::string> hits = misinformation.match(t.text);
    std::set<std::string> counted(hits.begin(), hits.end());
    if (tracked) {
      for (auto& k : tracked->match(t.text)) counted.insert(std::move(k));
    }
    for (const auto& k : counted) ++s.per_keyword[k];
    out.tagged.push_back(TaggedTweet{std::move(t), std::move(hits)});
  }
  for (const auto& [k, n] : s.per_keyword) {
    s.fraction[k] = static_cast<double>(n) / static_cast<double>(s.total);
  }
  out.stats = std::move(s);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Table window_stats_table(const std::vector<WindowStats>& stats) {
  Table t;
  t.columns = {"window_start", "keyword", "matches", "total", "fraction"};
  std::vector<const WindowStats*> sorted;
  for (const auto& s : stats) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->window_start < b->window_start; });
  for (const auto* s : sorted) {
    for (const auto& [k, n] : s->per_keyword) {
      auto f = s->fraction.find(k);
      t.rows.push_back({format_iso8601(s->window_start), k, std::to_string(n),
                        std::to_string(s->total), format_double(f == s->fraction.end() ? 0.0 : f->second)});
    }
  }
  return t;
}

std::vector<std::pair<Timestamp, double>> drift_fraction(const std::vector<WindowStats>& stats,
                                                         std::string_view keyword,
                                                         std::size_t smoothing) {
  std::string k = normalize_keyword(keyword);
  std::vector<std::pair<Timestamp, double>> raw;
  raw.reserve(stats.size());
  for (const auto& s : stats) {
    double f = 0.0;
    if (auto it = s.per_keyword.find(k); it != s.per_keyword.end() && s.total > 0) {
      f = static_cast<double>(it->second) / static_cast<double>(s.total);
    }
    raw.emplace_back(s.window_start, f);
  }
  if (smoothing <= 1 || raw.empty()) return raw;
  std::vector<std::pair<Timestamp, double>> out;
  out.reserve(raw.size());
  const std::size_t left = (smoothing - 1) / 2, right = smoothing / 2;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::size_t lo = i >= left ? i - left : 0;
    std::size_t hi = std::min(raw.size() - 1, i + right);
    double sum = 0;
    for (std::size_t j = lo; j <= hi; ++j) sum += raw[j].second;
    out.emplace_back(raw[i].first, sum / static_cast<double>(hi - lo + 1));
  }
  return out;
}

}  // namespace edna::covid
