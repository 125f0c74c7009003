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

#include "edna/covid/cleaning.hpp"

namespace edna::covid {

bool RelevanceFilter::keep(const Tweet& tweet) const {
  if (!keywords_.match(tweet.text).empty()) return true;
  if (tweet.retweet_of && lookup_) {
    if (auto parent = lookup_(*tweet.retweet_of)) return *parent;
  }
  return false;
}

MetadataResult extract_metadata(const StreamRecord& record, const RelevanceFilter& filter) {
  MetadataResult out;
  ParsedTweet parsed = parse_tweet(record.payload);
  if (!parsed.tweet) {
    out.reason = parsed.reason;
    return out;
  }
  if (!filter.keep(*parsed.tweet)) {
    out.reason = Discard::kIrrelevant;
    return out;
  }
  out.tweet = std::move(parsed.tweet);
  return out;
}

}  // namespace edna::covid
