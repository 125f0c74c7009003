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

#include "edna/covid/sentiment.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/text.hpp"

namespace edna::covid {
namespace {

std::unordered_set<std::string> fold_all(const std::vector<std::string>& words) {
  std::unordered_set<std::string> out;
  for (const auto& w : words) {
    std::string k = normalize_keyword(w);
    if (!k.empty()) out.insert(std::move(k));
  }
  return out;
}

struct ScorerRegistry {
  std::mutex mu;
  std::map<std::string, SentimentFactory> factories;
};

ScorerRegistry& scorers() {
  static ScorerRegistry* r = [] {
    auto* reg = new ScorerRegistry;
    reg->factories["lexicon"] = [](const SentimentOptions& o) -> std::unique_ptr<SentimentScorer> {
      return LexiconSentiment::load(o.positive_lexicon, o.negative_lexicon);
    };
    return reg;
  }();
  return *r;
}

}  // namespace

LexiconSentiment::LexiconSentiment(const std::vector<std::string>& positive,
                                   const std::vector<std::string>& negative)
    : positive_(fold_all(positive)), negative_(fold_all(negative)) {}

std::unique_ptr<LexiconSentiment> LexiconSentiment::load(const std::filesystem::path& positive,
                                                         const std::filesystem::path& negative) {
  return std::make_unique<LexiconSentiment>(parse_keyword_lines(read_file(positive), "").keywords(),
                                            parse_keyword_lines(read_file(negative), "").keywords());
}

double LexiconSentiment::score(std::string_view text) const {
  if (text.empty()) return 0.0;
  long pos = 0, neg = 0;
  for (const auto& t : tokenize(text)) {
    if (positive_.count(t)) ++pos;
    if (negative_.count(t)) ++neg;
  }
  return static_cast<double>(pos - neg) / static_cast<double>(std::max(1L, pos + neg));
}

void register_sentiment_scorer(const std::string& name, SentimentFactory factory) {
  auto& r = scorers();
  std::lock_guard lock(r.mu);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<SentimentScorer> make_sentiment_scorer(const std::string& name,
                                                       const SentimentOptions& options) {
  SentimentFactory f;
  {
    auto& r = scorers();
    std::lock_guard lock(r.mu);
    auto it = r.factories.find(name);
    if (it == r.factories.end()) raise(ErrorCode::kPlugin, "unknown sentiment scorer '" + name + "'");
    f = it->second;
  }
  return f(options);
}

}  // namespace edna::covid
