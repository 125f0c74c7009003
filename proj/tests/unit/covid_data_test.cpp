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

#include <fstream>
#include <map>
#include <random>
#include <set>

#include "edna/common/csv.hpp"
#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/covid/article.hpp"
#include "edna/covid/stats.hpp"
#include "edna/covid/store.hpp"
#include "edna/covid/tweet.hpp"
#include "edna/covid/window_stats.hpp"
#include "edna/runtime/keyed_store.hpp"
#include "temp_dir.hpp"

namespace edna::covid {
namespace {

using edna::testing::TempDir;
using Strings = std::vector<std::string>;

// ---- article -----------------------------------------------------------------

TEST(Article, ConspiracySubHeadlines) {
  const char* doc =
      "Intro text\n"
      "== Origins ==\n=== Lab ===\n"
      "== Conspiracy ==\nbody\n=== 5G ===\ntext\n=== Bioweapon ===\n"
      "== Treatments ==\n=== Bleach ===\n";
  EXPECT_EQ(extract_conspiracy_keywords(doc), (Strings{"5g", "bioweapon"}));
  EXPECT_EQ(extract_conspiracy_keywords("== Other ==\n=== X ===\n"), Strings{});
  EXPECT_EQ(extract_conspiracy_keywords(""), Strings{});
}

TEST(Article, OddCasingAndWhitespaceNormalize) {
  std::string canonical = "== Conspiracy ==\n=== 5G ===\n=== Bill Gates ===\n";
  auto expected = extract_conspiracy_keywords(canonical);
  std::mt19937 rng(4);
  auto ws = [&] { return std::string(rng() % 3, rng() % 2 ? ' ' : '\t'); };
  auto recase = [&](std::string s) {
    for (auto& c : s) c = rng() % 2 ? std::toupper(c) : std::tolower(c);
    return s;
  };
  for (int i = 0; i < 200; ++i) {
    std::string doc = ws() + "==" + ws() + recase("Conspiracy") + ws() + "==" + ws() + "\n" + "===" + ws() +
                      recase("5G") + ws() + "===\n" + "===" + ws() + recase("Bill") + " " + ws() + recase("Gates") +
                      ws() + "===\n";
    EXPECT_EQ(extract_conspiracy_keywords(doc), expected) << doc;
  }
}

TEST(Article, MalformedHeadingsAreParseErrors) {
  for (const char* bad : {"== Conspiracy ===\n", "== ==\n", "=== x ==\n", "== bad \xff ==\n"}) {
    try {
      parse_headings(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << bad;
    }
  }
  auto h = parse_headings("== A ==\ntext\n=== B ===\n");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[1].level, 3);
  EXPECT_EQ(h[1].title, "B");
  EXPECT_EQ(h[1].line, 3u);
}

TEST(Article, ShippedArticle) {
  auto text = read_file(std::string(EDNA_SOURCE_DIR) + "/data/articles/covid_misinformation.txt");
  EXPECT_EQ(extract_conspiracy_keywords(text), (Strings{"5g", "bioweapon", "bill gates", "population control"}));
}

// ---- store -------------------------------------------------------------------

Tweet make_tweet(std::uint64_t id, std::string lang = "en", std::int64_t t_ms = 1'580'000'000'000) {
  Tweet t;
  t.tweet_id = id;
  t.text = "covid-19 " + std::to_string(id);
  t.lang = std::move(lang);
  t.created_at = from_millis(t_ms);
  t.raw = tweet_json(t).dump();
  return t;
}

TEST(Store, UpsertIdempotentAndMerges) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  auto t = make_tweet(42);
  EXPECT_TRUE(upsert_tweet(*s, t, {{"sentiment", 0.5}}));
  EXPECT_FALSE(upsert_tweet(*s, t, {{"sentiment", 0.5}}));
  EXPECT_EQ(s->count(kTweetsCollection), 1u);
  EXPECT_TRUE(upsert_tweet(*s, t, {{"misinformation_keywords", Strings{"5g"}}}));
  EXPECT_EQ(s->count(kTweetsCollection), 1u);
  auto doc = *s->get(kTweetsCollection, "42");
  EXPECT_EQ(doc["misinformation_keywords"], nlohmann::json(Strings{"5g"}));
  EXPECT_EQ(doc["sentiment"], 0.5);
  EXPECT_EQ(doc["id"], 42u);
  for (std::uint64_t i = 100; i < 150; ++i) upsert_tweet(*s, make_tweet(i), nlohmann::json::object());
  EXPECT_EQ(s->count(kTweetsCollection), 51u);
}

TEST(Store, Verdicts) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  EXPECT_FALSE(lookup_verdict(*s, 7));
  record_verdict(*s, 7, true);
  EXPECT_EQ(lookup_verdict(*s, 7), true);
}

TEST(Store, ExportIds) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  EXPECT_EQ(export_tweet_ids(*s, d / "empty.txt"), 0u);
  EXPECT_EQ(read_file(d / "empty.txt"), "");
  for (std::uint64_t id : {3, 1, 2}) upsert_tweet(*s, make_tweet(id), nlohmann::json::object());
  EXPECT_EQ(export_tweet_ids(*s, d / "ids.txt"), 3u);
  EXPECT_EQ(read_file(d / "ids.txt"), "1\n2\n3\n");
  EXPECT_THROW(export_tweet_ids(*s, d / "no-such-dir" / "x" / "ids.txt"), Error);
  EXPECT_FALSE(std::filesystem::exists(d / "no-such-dir" / "x" / "ids.txt"));
}

TEST(Store, ExportRoundTrip) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  std::mt19937_64 rng(8);
  std::set<std::uint64_t> ids;
  for (int i = 0; i < 300; ++i) {
    std::uint64_t id = 1 + rng() % 1'000'000'000'000'000'000ull;
    ids.insert(id);
    upsert_tweet(*s, make_tweet(id), nlohmann::json::object());
  }
  export_tweet_ids(*s, d / "ids.txt");
  std::ifstream f(d / "ids.txt");
  std::set<std::uint64_t> back;
  std::uint64_t prev = 0, v;
  while (f >> v) {
    EXPECT_GT(v, prev);
    prev = v;
    back.insert(v);
  }
  EXPECT_EQ(back, ids);
  std::set<std::string> keys;
  for (auto& k : s->keys(kTweetsCollection)) keys.insert(k);
  std::set<std::string> back_keys;
  for (auto id : back) back_keys.insert(std::to_string(id));
  EXPECT_EQ(back_keys, keys);
}

// ---- stats -------------------------------------------------------------------

TEST(Stats, FormatHelpers) {
  EXPECT_EQ(format_thousands(8714684), "8,714,684");
  EXPECT_EQ(format_thousands(0), "0");
  EXPECT_EQ(format_thousands(999), "999");
  EXPECT_EQ(format_thousands(1000), "1,000");
  EXPECT_EQ(format_percent(634, 1000), "63.4");
  EXPECT_EQ(format_percent(1, 1), "100.0");
  EXPECT_EQ(format_percent(1, 2000), "0.1");  // 0.05 rounds up
  EXPECT_EQ(format_percent(0, 0), "0.0");
}

TEST(Stats, MonthBoundary) {
  MonthlyCounts m;
  m.add(*parse_iso8601("2020-01-31T23:59:59Z"));
  m.add(*parse_iso8601("2020-02-01T00:00:00Z"));
  auto t = m.table();
  EXPECT_EQ(t.columns, (Strings{"month", "count"}));
  EXPECT_EQ(t.rows, (std::vector<Strings>{{"2020-01", "1"}, {"2020-02", "1"}}));
  MonthlyCounts one;
  for (int i = 0; i < 5; ++i) one.add(*parse_iso8601("2020-03-0" + std::to_string(i + 1)));
  EXPECT_EQ(one.table().rows.size(), 1u);
}

TEST(Stats, Table1FixtureReproducesRows) {
  auto text = read_file(std::string(EDNA_SOURCE_DIR) + "/data/fixtures/monthly_counts.csv");
  auto m = monthly_counts_from_fixture(text);
  const std::vector<Strings> expected = {
      {"2020-01", "8714684"},  {"2020-02", "25553003"}, {"2020-03", "31564785"},
      {"2020-04", "25498020"}, {"2020-05", "26895960"}, {"2020-06", "99415221"},
      {"2020-07", "112215578"}, {"2020-08", "113543567"}, {"2020-09", "103454256"}};
  EXPECT_EQ(m.table().rows, expected);
  std::uint64_t sum = 0;
  for (const auto& r : expected) sum += std::stoull(r[1]);
  EXPECT_EQ(sum, 546855074u);
  EXPECT_EQ(m.total(), sum);
}

TEST(Stats, LanguageSharesAndOrdering) {
  LanguageCounts l;
  l.add("en", 634);
  l.add("es", 123);
  l.add("fr", 123);
  l.add("pt", 120);
  auto t = l.table();
  EXPECT_EQ(t.columns, (Strings{"lang", "count", "pct"}));
  EXPECT_EQ(t.rows[0], (Strings{"en", "634", "63.4"}));
  EXPECT_EQ(t.rows[1][0], "es");  // tie broken by code
  EXPECT_EQ(t.rows[2][0], "fr");
  LanguageCounts single;
  single.add("ja", 3);
  EXPECT_EQ(single.table().rows, (std::vector<Strings>{{"ja", "3", "100.0"}}));
}

TEST(Stats, StoreCountsMatchBruteForce) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  std::mt19937_64 rng(12);
  Strings langs = {"en", "es", "fr", "ja", "und"};
  std::map<std::string, std::uint64_t> by_lang, by_month;
  for (std::uint64_t id = 1; id <= 800; ++id) {
    std::string lang = langs[rng() % langs.size()];
    std::int64_t t = 1'577'836'800'000 + static_cast<std::int64_t>(rng() % (300ull * 86'400'000));
    upsert_tweet(*s, make_tweet(id, lang, t), nlohmann::json::object());
    ++by_lang[lang];
    ++by_month[format_month(from_millis(t))];
  }
  std::vector<Strings> expect_months;
  for (auto& [m, c] : by_month) expect_months.push_back({m, std::to_string(c)});
  EXPECT_EQ(monthly_counts(*s).table().rows, expect_months);
  auto lt = language_counts(*s).table();
  std::uint64_t total = 0;
  for (auto& row : lt.rows) {
    EXPECT_EQ(std::stoull(row[1]), by_lang[row[0]]);
    total += std::stoull(row[1]);
  }
  EXPECT_EQ(total, 800u);
  for (std::size_t i = 1; i < lt.rows.size(); ++i) EXPECT_GE(std::stoull(lt.rows[i - 1][1]), std::stoull(lt.rows[i][1]));
}

TEST(Stats, EmptyStoreHeaderOnly) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  EXPECT_EQ(to_csv(monthly_counts(*s).table()), "month,count\r\n");
}

// ---- window stats ------------------------------------------------------------

TEST(WindowStats, TagArithmetic) {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 10; ++i) {
    Tweet t = make_tweet(i + 1);
    t.text = i < 3 ? "5G towers" : "nothing here";
    tweets.push_back(t);
  }
  KeywordMatcher mis({"5g", "bleach"});
  auto r = tag_window(from_millis(0), from_millis(60000), tweets, mis);
  ASSERT_TRUE(r.stats);
  EXPECT_EQ(r.stats->total, 10u);
  EXPECT_EQ(r.stats->per_keyword.at("5g"), 3u);
  EXPECT_EQ(r.stats->fraction.at("5g"), 0.3);
  EXPECT_EQ(r.stats->per_keyword.at("bleach"), 0u);
  EXPECT_EQ(r.tagged[0].keywords, Strings{"5g"});
  EXPECT_TRUE(r.tagged[5].keywords.empty());

  auto none = tag_window(from_millis(0), from_millis(60000), tweets, KeywordMatcher{});
  for (auto& t : none.tagged) EXPECT_TRUE(t.keywords.empty());
  EXPECT_TRUE(none.stats->per_keyword.empty());
  EXPECT_FALSE(tag_window(from_millis(0), from_millis(1), {}, mis).stats);
}

TEST(WindowStats, TrackedKeywordsCountButDoNotTag) {
  std::vector<Tweet> tweets = {make_tweet(1)};
  KeywordMatcher mis({"5g"}), tracked({"covid-19"});
  auto r = tag_window(from_millis(0), from_millis(60000), tweets, mis, &tracked);
  EXPECT_EQ(r.stats->per_keyword.at("covid-19"), 1u);
  EXPECT_TRUE(r.tagged[0].keywords.empty());
}

TEST(WindowStats, JsonAndTableAndDrift) {
  WindowStats a{from_millis(0), from_millis(60000), 10, {{"k", 3}}, {{"k", 0.3}}};
  WindowStats b{from_millis(60000), from_millis(120000), 10, {{"k", 7}}, {{"k", 0.7}}};
  EXPECT_EQ(window_stats_from_json(window_stats_to_json(a)), a);
  EXPECT_THROW(window_stats_from_json(nlohmann::json::array()), Error);
  auto t = window_stats_table({a, b});
  EXPECT_EQ(t.columns, (Strings{"window_start", "keyword", "matches", "total", "fraction"}));
  EXPECT_EQ(t.rows[0], (Strings{"1970-01-01T00:00:00.000Z", "k", "3", "10", "0.3"}));
  auto series = drift_fraction({a, b}, "k");
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].second, 0.3);
  EXPECT_EQ(series[1].second, 0.7);
  EXPECT_TRUE(drift_fraction({}, "k").empty());
  for (auto& p : drift_fraction({a, b}, "unknown")) EXPECT_EQ(p.second, 0.0);
  auto smooth = drift_fraction({a, b, a}, "k", 3);
  EXPECT_DOUBLE_EQ(smooth[1].second, (0.3 + 0.7 + 0.3) / 3);
}

TEST(WindowStats, StoreRoundTripOrdered) {
  TempDir d;
  auto s = runtime::KeyedStore::open(d / "s.db");
  WindowStats a{from_millis(120000), from_millis(180000), 4, {{"k", 1}}, {{"k", 0.25}}};
  WindowStats b{from_millis(0), from_millis(60000), 2, {{"k", 2}}, {{"k", 1.0}}};
  upsert_window_stats(*s, a);
  upsert_window_stats(*s, b);
  EXPECT_FALSE(upsert_window_stats(*s, b));
  auto back = load_window_stats(*s);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], b);
  EXPECT_EQ(back[1], a);
}

}  // namespace
}  // namespace edna::covid
