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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/covid/generator.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/text.hpp"
#include "edna/covid/tweet.hpp"
#include "temp_dir.hpp"

namespace edna::covid {
namespace {

using edna::testing::TempDir;

const char* kProfile = R"({
  "seed": 7, "rate": 50, "malformed_rate": 0, "retweet_rate": 0,
  "schedule": [{"start": "2020-03-01T00:00:00Z",
                "prevalence": {"mask": 0.30, "wuhan": 0.05},
                "languages": {"en": 0.7, "es": 0.3}}]
})";

double sigma3(double p, double n) { return 3.0 * std::sqrt(p * (1 - p) / n); }

TEST(Generator, SameSeedSameBytes) {
  TweetGenerator a(parse_drift_profile(kProfile)), b(parse_drift_profile(kProfile));
  for (std::uint64_t i = 0; i < 500; ++i) EXPECT_EQ(serialize_record(a.record(i)), serialize_record(b.record(i)));
  auto other = parse_drift_profile(kProfile);
  other.seed = 8;
  TweetGenerator c(other);
  int differ = 0;
  for (std::uint64_t i = 0; i < 50; ++i) differ += a.record(i).payload != c.record(i).payload;
  EXPECT_GT(differ, 40);
}

TEST(Generator, PrevalenceWithinBinomialBound) {
  TweetGenerator g(parse_drift_profile(kProfile));
  KeywordMatcher m({"mask", "wuhan"});
  const std::uint64_t n = 100000;
  std::uint64_t mask = 0, wuhan = 0, en = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto gen = g.generate(i);
    auto t = parse_tweet(gen.record.payload);
    ASSERT_TRUE(t.tweet) << i;
    auto hits = m.match(t.tweet->text);
    // What the text says agrees with what the generator meant to insert.
    std::vector<std::string> meant;
    for (const auto& k : gen.keywords) meant.push_back(normalize_keyword(k));
    std::sort(meant.begin(), meant.end());
    ASSERT_EQ(hits, meant) << t.tweet->text;
    mask += std::count(hits.begin(), hits.end(), "mask");
    wuhan += std::count(hits.begin(), hits.end(), "wuhan");
    en += t.tweet->lang == "en";
  }
  double fm = double(mask) / n, fw = double(wuhan) / n, fe = double(en) / n;
  EXPECT_NEAR(fm, 0.30, 0.01);
  EXPECT_NEAR(fm, 0.30, sigma3(0.30, n));
  EXPECT_NEAR(fw, 0.05, sigma3(0.05, n));
  EXPECT_NEAR(fe, 0.70, sigma3(0.70, n));
}

TEST(Generator, TimesFollowRateAndSampling) {
  auto p = parse_drift_profile(kProfile);
  p.sampling_ratio = 0.5;
  TweetGenerator g(p);
  auto t0 = to_millis(g.time_of(0));
  EXPECT_EQ(t0, to_millis(*parse_iso8601("2020-03-01T00:00:00Z")));
  EXPECT_EQ(to_millis(g.time_of(1)) - t0, 40);     // 1000 / (50 * 0.5)
  EXPECT_EQ(to_millis(g.time_of(1000)) - t0, 40000);
}

TEST(Generator, InjectionsAtConfiguredRates) {
  auto p = parse_drift_profile(R"({"seed": 3, "rate": 10, "malformed_rate": 0.02, "retweet_rate": 0.05,
    "schedule": [{"start": "2020-01-01T00:00:00Z", "prevalence": {"virus": 0.5}, "languages": {"en": 1}}]})");
  EXPECT_DOUBLE_EQ(p.truncated_rate, 0.01);
  EXPECT_DOUBLE_EQ(p.empty_rate, 0.01);
  TweetGenerator g(p);
  const std::uint64_t n = 50000;
  std::map<Injection, std::uint64_t> count;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto gen = g.generate(i);
    ++count[gen.injection];
    auto parsed = parse_tweet(gen.record.payload);
    switch (gen.injection) {
      case Injection::kTruncated:
        EXPECT_FALSE(parsed.tweet);
        EXPECT_EQ(parsed.reason, Discard::kMalformed);
        break;
      case Injection::kEmpty:
        EXPECT_EQ(parsed.reason, Discard::kEmpty);
        break;
      case Injection::kRetweet:
        ASSERT_TRUE(parsed.tweet);
        ASSERT_TRUE(parsed.tweet->retweet_of);
        EXPECT_LT(*parsed.tweet->retweet_of, parsed.tweet->tweet_id);
        EXPECT_TRUE(KeywordMatcher({"virus"}).match(parsed.tweet->text).empty());
        break;
      case Injection::kNone:
        ASSERT_TRUE(parsed.tweet);
        EXPECT_EQ(parsed.tweet->tweet_id, TweetGenerator::kIdBase + i);
        break;
    }
  }
  EXPECT_NEAR(double(count[Injection::kTruncated]) / n, 0.01, sigma3(0.01, n));
  EXPECT_NEAR(double(count[Injection::kEmpty]) / n, 0.01, sigma3(0.01, n));
  EXPECT_NEAR(double(count[Injection::kRetweet]) / n, 0.05, sigma3(0.05, n));
}

TEST(Generator, SegmentLookup) {
  auto p = parse_drift_profile(R"({"seed": 1, "rate": 1,
    "schedule": [{"start": "2020-01-01T00:00:00Z", "prevalence": {"a": 0.1}, "languages": {"en": 1}},
                 {"start": "2020-01-01T00:10:00Z", "prevalence": {"a": 0.9}, "languages": {"en": 1}}]})");
  TweetGenerator g(p);
  EXPECT_EQ(g.segment_index(g.time_of(599)), 0u);
  EXPECT_EQ(g.segment_index(g.time_of(600)), 1u);
}

void expect_field_error(const std::string& json, const std::string& field) {
  try {
    parse_drift_profile(json);
    FAIL() << json;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
  }
}

TEST(Generator, ProfileValidationNamesField) {
  const std::string seg = R"({"start": "2020-01-01T00:00:00Z", "prevalence": {"a": 0.1}, "languages": {"en": 1}})";
  expect_field_error(R"({"rate": 0, "schedule": [)" + seg + "]}", "rate");
  expect_field_error(R"({"schedule": []})", "schedule");
  expect_field_error(R"({"schedule": [{"start": "2020-01-01T00:00:00Z", "prevalence": {"a": 1.5},
                         "languages": {"en": 1}}]})", "prevalence");
  expect_field_error(R"({"schedule": [{"start": "2020-01-01T00:00:00Z", "prevalence": {},
                         "languages": {"en": 0.5, "es": 0.4}}]})", "languages");
  expect_field_error(R"({"schedule": [)" + seg + "," + seg + "]}", "start");
  expect_field_error(R"({"bogus": 1, "schedule": [)" + seg + "]}", "bogus");
  expect_field_error("not json", "");
}

TEST(Generator, CorpusFileAndEmptyBudget) {
  TempDir d;
  TweetGenerator g(parse_drift_profile(kProfile));
  write_corpus(g, 0, d / "empty.frames");
  EXPECT_TRUE(read_file(d / "empty.frames").empty());
  write_corpus(g, 25, d / "c.frames");
  Bytes data = read_file(d / "c.frames");
  std::string_view rest(data);
  std::uint64_t i = 0;
  while (!rest.empty()) {
    auto f = decode_frame(rest);
    EXPECT_EQ(f.record, g.record(i++));
    rest.remove_prefix(f.size);
  }
  EXPECT_EQ(i, 25u);
}

}  // namespace
}  // namespace edna::covid
