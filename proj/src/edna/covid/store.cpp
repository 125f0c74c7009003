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

#include "edna/covid/store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "edna/common/error.hpp"

namespace edna::covid {

bool upsert_tweet(runtime::KeyedStore& store, const Tweet& tweet, const nlohmann::json& enrichments) {
  nlohmann::json doc = tweet_document(tweet);
  if (enrichments.is_object()) {
    for (auto it = enrichments.begin(); it != enrichments.end(); ++it) doc[it.key()] = it.value();
  }
  return store.upsert(kTweetsCollection, std::to_string(tweet.tweet_id), doc);
}

bool upsert_window_stats(runtime::KeyedStore& store, const WindowStats& stats) {
  return store.upsert(kWindowStatsCollection, format_iso8601(stats.window_start),
                      window_stats_to_json(stats));
}

std::vector<WindowStats> load_window_stats(runtime::KeyedStore& store) {
  std::vector<WindowStats> out;
  store.for_each(kWindowStatsCollection, [&](const std::string&, const nlohmann::json& doc) {
    out.push_back(window_stats_from_json(doc));
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.window_start < b.window_start; });
  return out;
}

void record_verdict(runtime::KeyedStore& store, std::uint64_t tweet_id, bool kept) {
  store.upsert(kVerdictsCollection, std::to_string(tweet_id), nlohmann::json{{"kept", kept}});
}

std::optional<bool> lookup_verdict(runtime::KeyedStore& store, std::uint64_t tweet_id) {
  auto doc = store.get(kVerdictsCollection, std::to_string(tweet_id));
  if (!doc || !doc->is_object()) return std::nullopt;
  auto it = doc->find("kept");
  if (it == doc->end() || !it->is_boolean()) return std::nullopt;
  return it->get<bool>();
}

std::vector<std::uint64_t> stored_tweet_ids(runtime::KeyedStore& store) {
  std::vector<std::uint64_t> ids;
  for (const auto& k : store.keys(kTweetsCollection)) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
    if (ec != std::errc{} || p != k.data() + k.size()) {
      raise(ErrorCode::kParse, "tweet row key '" + k + "' is not a decimal id");
    }
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::uint64_t export_tweet_ids(runtime::KeyedStore& store, const std::filesystem::path& out) {
  std::vector<std::uint64_t> ids = stored_tweet_ids(store);
  try {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) raise(ErrorCode::kIo, "cannot open " + out.string() + " for writing");
    for (auto id : ids) f << id << '\n';
    f.flush();
    if (!f) raise(ErrorCode::kIo, "write to " + out.string() + " failed");
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(out, ec);
    throw;
  }
  return ids.size();
}

}  // namespace edna::covid
