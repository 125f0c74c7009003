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
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace edna::covid {

struct KeywordEntry {
  std::string keyword;  // normalized
  std::string lang = "und";
  bool operator==(const KeywordEntry&) const = default;
};

struct KeywordSet {
  std::string set_id;
  std::vector<KeywordEntry> entries;
  std::uint64_t version = 0;

  // Normalizes; empty keywords and duplicates (after normalization) are
  // ignored. Returns whether an entry was added.
  bool add(std::string_view keyword, std::string_view lang = "und");
  std::vector<std::string> keywords() const;
};

// One keyword per line, optionally followed by a tab and a language code.
// Blank lines and lines starting with '#' are skipped.
KeywordSet parse_keyword_lines(std::string_view text, std::string set_id);

// Cache representation: a JSON array of keyword strings.
std::string keywords_to_json(const std::vector<std::string>& keywords);
// Throws kParse unless the text is a JSON array of strings.
std::vector<std::string> keywords_from_json(std::string_view text);

// Case-insensitive matching on NFKC-folded text. Keywords containing CJK
// characters match as substrings; others match whole tokens, multi-word
// keywords as contiguous token runs. No stemming: "masks" is not "mask".
class KeywordMatcher {
 public:
  KeywordMatcher() = default;
  explicit KeywordMatcher(const std::vector<std::string>& keywords);

  // Matched keywords (normalized), sorted, no duplicates.
  std::vector<std::string> match(std::string_view text) const;
  const std::vector<std::string>& keywords() const noexcept { return keywords_; }
  bool empty() const noexcept { return keywords_.empty(); }

 private:
  struct Compiled {
    std::string keyword;
    bool cjk = false;
    std::vector<std::string> tokens;
  };
  std::vector<std::string> keywords_;
  std::vector<Compiled> compiled_;
};

}  // namespace edna::covid
