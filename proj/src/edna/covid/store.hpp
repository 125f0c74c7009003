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
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "edna/covid/tweet.hpp"
#include "edna/covid/window_stats.hpp"
#include "edna/runtime/keyed_store.hpp"

namespace edna::covid {

// Collections of the pipeline's keyed store.
inline constexpr std::string_view kTweetsCollection = "tweets";
inline constexpr std::string_view kWindowStatsCollection = "window_stats";
inline constexpr std::string_view kVerdictsCollection = "verdicts";

// Row keyed by the decimal tweet id: the original tweet fields merged with
// the enrichments (sentiment, misinformation_keywords). Identical content
// is a no-op; returns whether the row changed.
bool upsert_tweet(runtime::KeyedStore& store, const Tweet& tweet, const nlohmann::json& enrichments);

// Window stats rows are keyed by the ISO-8601 window start.
bool upsert_window_stats(runtime::KeyedStore& store, const WindowStats& stats);
// Ordered by window start.
std::vector<WindowStats> load_window_stats(runtime::KeyedStore& store);

// Relevance verdicts the metadata extractor keeps for the retweet rule.
void record_verdict(runtime::KeyedStore& store, std::uint64_t tweet_id, bool kept);
std::optional<bool> lookup_verdict(runtime::KeyedStore& store, std::uint64_t tweet_id);

// Ascending ids of the tweets collection.
std::vector<std::uint64_t> stored_tweet_ids(runtime::KeyedStore& store);

// One decimal id per line, ascending, LF endings. The partial file is
// removed on failure. Returns the number of lines.
std::uint64_t export_tweet_ids(runtime::KeyedStore& store, const std::filesystem::path& out);

}  // namespace edna::covid
