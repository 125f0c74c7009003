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

#include "edna/covid/tweet.hpp"

#include <algorithm>
#include <array>

namespace edna::covid {
namespace {

// Twitter's language codes plus Javanese.
constexpr std::array<std::string_view, 66> kLanguages = {
    "am", "ar", "bg", "bn", "bo", "ca", "ckb", "cs", "cy", "da", "de", "dv", "el", "en",
    "es", "et", "eu", "fa", "fi", "fr", "gu", "he", "hi", "ht", "hu", "hy", "id", "in",
    "is", "it", "iw", "ja", "jv", "ka", "km", "kn", "ko", "lo", "lt", "lv", "ml", "mr",
    "ms", "my", "ne", "nl", "no", "or", "pa", "pl", "ps", "pt", "ro", "ru", "sd", "si",
    "sk", "sl", "sr", "sv", "ta", "te", "th", "tl", "tr", "und"};
constexpr std::array<std::string_view, 5> kMoreLanguages = {"ug", "uk", "ur", "vi", "zh"};

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
}

}  // namespace

std::string_view discard_name(Discard reason) noexcept {
  switch (reason) {
    case Discard::kMalformed: return "malformed";
    case Discard::kEmpty: return "empty";
    case Discard::kIrrelevant: return "irrelevant";
  }
  return "unknown";
}

bool is_known_language(std::string_view code) noexcept {
  return std::find(kLanguages.begin(), kLanguages.end(), code) != kLanguages.end() ||
         std::find(kMoreLanguages.begin(), kMoreLanguages.end(), code) != kMoreLanguages.end();
}

std::string normalize_language(std::string_view code) {
  std::string s(code);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return is_known_language(s) ? s : "und";
}

ParsedTweet parse_tweet(std::string_view payload) {
  ParsedTweet out;
  auto j = nlohmann::json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return out;
  auto id = j.find("id");
  auto text = j.find("text");
  auto lang = j.find("lang");
  auto created = j.find("created_at");
  if (id == j.end() || !id->is_number_unsigned() || text == j.end() || !text->is_string() ||
      lang == j.end() || !lang->is_string() || created == j.end() || !created->is_string()) {
    return out;
  }
  Tweet t;
  t.tweet_id = id->get<std::uint64_t>();
  if (t.tweet_id == 0) return out;
  auto ts = parse_iso8601(created->get<std::string>());
  if (!ts) return out;
  t.created_at = *ts;
  if (auto rt = j.find("retweeted_status_id"); rt != j.end() && !rt->is_null()) {
    if (!rt->is_number_unsigned() || rt->get<std::uint64_t>() == 0) return out;
    t.retweet_of = rt->get<std::uint64_t>();
  }
  t.text = text->get<std::string>();
  if (blank(t.text)) {
    out.reason = Discard::kEmpty;
    return out;
  }
  t.lang = normalize_language(lang->get<std::string>());
  t.raw = Bytes(payload);
  out.tweet = std::move(t);
  return out;
}

nlohmann::json tweet_json(const Tweet& t) {
  nlohmann::json j = {{"id", t.tweet_id},
                      {"text", t.text},
                      {"lang", t.lang},
                      {"created_at", format_iso8601(t.created_at)}};
  if (t.retweet_of) j["retweeted_status_id"] = *t.retweet_of;
  return j;
}

nlohmann::json tweet_document(const Tweet& t) {
  if (!t.raw.empty()) {
    auto j = nlohmann::json::parse(t.raw, nullptr, false);
    if (j.is_object()) return j;
  }
  return tweet_json(t);
}

}  // namespace edna::covid
