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

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace edna::covid {

// Scores text in [-1, +1]. Implementations must be deterministic.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual double score(std::string_view text) const = 0;
};

// (positive hits - negative hits) / max(1, total hits), counting tokens.
class LexiconSentiment final : public SentimentScorer {
 public:
  LexiconSentiment(const std::vector<std::string>& positive, const std::vector<std::string>& negative);
  // One word per line; '#' comments.
  static std::unique_ptr<LexiconSentiment> load(const std::filesystem::path& positive,
                                                const std::filesystem::path& negative);
  double score(std::string_view text) const override;

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

struct SentimentOptions {
  std::filesystem::path positive_lexicon;
  std::filesystem::path negative_lexicon;
};

using SentimentFactory = std::function<std::unique_ptr<SentimentScorer>(const SentimentOptions&)>;

// Named scorers; "lexicon" is always present.
void register_sentiment_scorer(const std::string& name, SentimentFactory factory);
std::unique_ptr<SentimentScorer> make_sentiment_scorer(const std::string& name,
                                                       const SentimentOptions& options);

}  // namespace edna::covid
