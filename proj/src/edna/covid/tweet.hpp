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
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "edna/common/bytes.hpp"
#include "edna/common/time.hpp"

namespace edna::covid {

// Schema tags of the records the pipeline passes around.
inline constexpr std::string_view kTweetJsonTag = "tweet-json";
inline constexpr std::string_view kEnrichmentTag = "tweet-enrichment";
inline constexpr std::string_view kWindowStatsTag = "window-stats";

struct Tweet {
  std::uint64_t tweet_id = 0;
  std::string text;
  std::string lang = "und";
  Timestamp created_at{};
  std::optional<std::uint64_t> retweet_of;
  Bytes raw;
};

enum class Discard { kMalformed, kEmpty, kIrrelevant };
std::string_view discard_name(Discard reason) noexcept;

bool is_known_language(std::string_view code) noexcept;
// Lower-cased code if known, otherwise "und".
std::string normalize_language(std::string_view code);

struct ParsedTweet {
  std::optional<Tweet> tweet;
  Discard reason = Discard::kMalformed;  // meaningful when tweet is empty
};

// Malformed: not a JSON object, or id/text/lang/created_at missing or of
// the wrong type, id 0, bad timestamp. Empty: text is blank.
ParsedTweet parse_tweet(std::string_view payload);

// The payload form: id, text, lang, created_at and, for retweets,
// retweeted_status_id.
nlohmann::json tweet_json(const Tweet& tweet);

// Document stored for a tweet: the original fields as received.
nlohmann::json tweet_document(const Tweet& tweet);

}  // namespace edna::covid
