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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "edna/common/csv.hpp"
#include "edna/common/time.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/tweet.hpp"

namespace edna::covid {

struct WindowStats {
  Timestamp window_start{};
  Timestamp window_end{};
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> per_keyword;
  std::map<std::string, double> fraction;

  bool operator==(const WindowStats&) const = default;
};

nlohmann::json window_stats_to_json(const WindowStats& stats);
// Throws kParse on a malformed document.
WindowStats window_stats_from_json(const nlohmann::json& doc);

struct TaggedTweet {
  Tweet tweet;
  std::vector<std::string> keywords;  // matched misinformation keywords
};

struct TagResult {
  std::vector<TaggedTweet> tagged;
  std::optional<WindowStats> stats;  // absent for an empty window
};

// Tags every tweet with its misinformation keywords and counts matches for
// the window. Stats cover every misinformation keyword plus `tracked` ones
// (counted but not used as tags), zero counts included.
TagResult tag_window(Timestamp window_start, Timestamp window_end, std::vector<Tweet> tweets,
                     const KeywordMatcher& misinformation, const KeywordMatcher* tracked = nullptr);

// window_start,keyword,matches,total,fraction; one row per (window,
// keyword), windows ascending, keywords ascending.
Table window_stats_table(const std::vector<WindowStats>& stats);

// One point per window (missing windows stay missing). smoothing = centered
// moving average over that many windows; 1 leaves the series alone. A
// keyword that never appears yields zeros.
std::vector<std::pair<Timestamp, double>> drift_fraction(const std::vector<WindowStats>& stats,
                                                         std::string_view keyword,
                                                         std::size_t smoothing = 1);

// Shortest text that reads back as the same double.
std::string format_double(double v);

}  // namespace edna::covid
