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

#include <random>
#include <set>

#include "edna/common/error.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/text.hpp"

namespace edna::covid {
namespace {

using Strings = std::vector<std::string>;

TEST(Text, FoldingIsNfkcCaseFold) {
  EXPECT_EQ(fold_text("COVID-19"), "covid-19");
  EXPECT_EQ(fold_text("\xEF\xBC\xAD\xEF\xBC\xA1\xEF\xBC\xB3\xEF\xBC\xAB"), "mask");  // fullwidth MASK
  EXPECT_EQ(fold_text("Stra\xC3\x9F" "e"), "strasse");
  EXPECT_EQ(normalize_keyword("  Bill \t  GATES "), "bill gates");
}

TEST(Text, TokensKeepHyphensAndDigits) {
  EXPECT_EQ(tokenize("Is #COVID-19 over? ncov-19, no."), (Strings{"is", "covid-19", "over", "ncov-19", "no"}));
  EXPECT_EQ(tokenize(""), Strings{});
  EXPECT_EQ(tokenize("a\xE2\x80\x90" "b"), Strings{"a\xE2\x80\x90" "b"});  // U+2010 hyphen
}

TEST(Text, CjkDetection) {
  EXPECT_TRUE(has_cjk("\xE6\xAD\xA6\xE6\xB1\x89"));                 // 武汉
  EXPECT_TRUE(has_cjk("\xE3\x82\xB3\xE3\x83\xAD\xE3\x83\x8A"));     // コロナ
  EXPECT_FALSE(has_cjk("wuhan"));
}

TEST(KeywordMatcher, Examples) {
  KeywordMatcher m({"coronavirus", "covid-19", "ncov-19", "pandemic", "mask", "wuhan", "virus"});
  EXPECT_EQ(m.match("Wuhan lockdown extended"), Strings{"wuhan"});
  EXPECT_EQ(m.match("carnival of masks"), Strings{});
  EXPECT_EQ(m.match("covid-19 pandemic: wear a MASK"), (Strings{"covid-19", "mask", "pandemic"}));
  EXPECT_EQ(m.match("coronaviruses"), Strings{});
  EXPECT_EQ(m.match("anti-virus"), Strings{});  // one token
}

TEST(KeywordMatcher, MultiWordAndCjk) {
  KeywordMatcher m({"Bill  Gates", "\xE6\xAD\xA6\xE6\xB1\x89"});
  EXPECT_EQ(m.keywords(), (Strings{"bill gates", "\xE6\xAD\xA6\xE6\xB1\x89"}));
  EXPECT_EQ(m.match("so BILL, gates said"), Strings{"bill gates"});
  EXPECT_EQ(m.match("bill the gates"), Strings{});
  EXPECT_EQ(m.match("\xE6\x88\x91\xE5\x9C\xA8\xE6\xAD\xA6\xE6\xB1\x89\xE5\xB8\x82"), Strings{"\xE6\xAD\xA6\xE6\xB1\x89"});
}

TEST(KeywordSet, ParseNormalizesAndDeduplicates) {
  auto s = parse_keyword_lines("# header\nMask\ten\n\n  mask  \nCOVID-19\ten\n", "relevance");
  EXPECT_EQ(s.set_id, "relevance");
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[0], (KeywordEntry{"mask", "en"}));
  EXPECT_EQ(s.entries[1].keyword, "covid-19");
}

TEST(KeywordSet, JsonRoundTrip) {
  Strings k = {"5g", "bill gates"};
  EXPECT_EQ(keywords_from_json(keywords_to_json(k)), k);
  EXPECT_THROW(keywords_from_json("{}"), Error);
  EXPECT_THROW(keywords_from_json("[1]"), Error);
  EXPECT_THROW(keywords_from_json("nope"), Error);
}

// ---- brute-force oracle ----------------------------------------------------
// Works on folded text. Token bytes: ASCII letters/digits, '-', and any byte
// of a non-ASCII character (the generator below only emits letters there).
bool token_byte(unsigned char c) { return std::isalnum(c) || c == '-' || c >= 0x80; }

Strings oracle_tokens(const std::string& s) {
  Strings out;
  std::string cur;
  for (unsigned char c : s) {
    if (token_byte(c)) {
      cur.push_back(static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Strings oracle_match(const std::string& text, const Strings& keywords) {
  std::string folded = fold_text(text);
  Strings toks = oracle_tokens(folded);
  std::set<std::string> hits;
  for (const auto& raw : keywords) {
    std::string k = normalize_keyword(raw);
    if (has_cjk(k)) {
      if (folded.find(k) != std::string::npos) hits.insert(k);
      continue;
    }
    Strings kt = oracle_tokens(k);
    for (std::size_t i = 0; i + kt.size() <= toks.size(); ++i) {
      bool all = true;
      for (std::size_t j = 0; j < kt.size() && all; ++j) all = toks[i + j] == kt[j];
      if (all) {
        hits.insert(k);
        break;
      }
    }
  }
  return {hits.begin(), hits.end()};
}

TEST(KeywordMatcher, AgreesWithBruteForceOracle) {
  Strings keywords = {"coronavirus", "covid-19", "ncov-19", "pandemic", "mask", "wuhan", "virus",
                      "bill gates", "5g", "\xE6\xAD\xA6\xE6\xB1\x89", "\xE3\x82\xB3\xE3\x83\xAD\xE3\x83\x8A"};
  Strings pieces = {"coronavirus", "Covid-19", "COVID", "19", "ncov-19", "pandemic", "Pandemics", "mask",
                    "masks", "MASK", "wuhan", "Wuhan's", "virus", "anti-virus", "bill", "gates", "Bill",
                    "5G", "5g-ready", "\xE6\xAD\xA6\xE6\xB1\x89", "\xE6\xAD\xA6", "\xE6\xB1\x89",
                    "\xE3\x82\xB3\xE3\x83\xAD\xE3\x83\x8A", "\xEF\xBD\x8D\xEF\xBD\x81\xEF\xBD\x93\xEF\xBD\x8B",
                    "the", "of", "news", "today", "x", "-", "covid-", "-19"};
  Strings seps = {" ", "  ", ", ", ". ", "!", "#", "@", "\t", "\n", "(", ")", "\"", "/", ":", ""};
  KeywordMatcher m(keywords);
  std::mt19937 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    std::size_t n = rng() % 12;
    for (std::size_t w = 0; w < n; ++w) {
      text += pieces[rng() % pieces.size()];
      text += seps[rng() % seps.size()];
    }
    ASSERT_EQ(m.match(text), oracle_match(text, keywords)) << "text: " << text;
  }
}

}  // namespace
}  // namespace edna::covid
