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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "edna/core/record.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/tweet.hpp"

namespace edna::covid {

// Keeps tweets that mention a relevance keyword, and retweets of tweets that
// were kept. parent_lookup answers "was this id kept?"; nullopt means unknown,
// in which case the retweet is judged by its own text.
class RelevanceFilter {
 public:
  using ParentLookup = std::function<std::optional<bool>(std::uint64_t)>;

  RelevanceFilter(KeywordMatcher keywords, ParentLookup parent_lookup = {})
      : keywords_(std::move(keywords)), lookup_(std::move(parent_lookup)) {}

  bool keep(const Tweet& tweet) const;
  const KeywordMatcher& keywords() const noexcept { return keywords_; }

 private:
  KeywordMatcher keywords_;
  ParentLookup lookup_;
};

struct MetadataResult {
  std::optional<Tweet> tweet;  // set when the tweet passes
  Discard reason = Discard::kMalformed;
};

MetadataResult extract_metadata(const StreamRecord& record, const RelevanceFilter& filter);

}  // namespace edna::covid
