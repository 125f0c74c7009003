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

#include "edna/covid/keywords.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_set>

#include "edna/common/error.hpp"
#include "edna/covid/text.hpp"

namespace edna::covid {

bool KeywordSet::add(std::string_view keyword, std::string_view lang) {
  std::string k = normalize_keyword(keyword);
  if (k.empty()) return false;
  for (const auto& e : entries) {
    if (e.keyword == k) return false;
  }
  entries.push_back(KeywordEntry{std::move(k), lang.empty() ? "und" : std::string(lang)});
  return true;
}

std::vector<std::string> KeywordSet::keywords() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.keyword);
  return out;
}

KeywordSet parse_keyword_lines(std::string_view text, std::string set_id) {
  KeywordSet set;
  set.set_id = std::move(set_id);
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::string_view lang = "und";
    if (auto tab = line.find('\t', first); tab != std::string_view::npos) {
      lang = line.substr(tab + 1);
      auto e = lang.find_last_not_of(" \t");
      lang = e == std::string_view::npos ? "und" : lang.substr(0, e + 1);
      line = line.substr(0, tab);
    }
    set.add(line, lang);
  }
  return set;
}

std::string keywords_to_json(const std::vector<std::string>& keywords) {
  return nlohmann::json(keywords).dump();
}

std::vector<std::string> keywords_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array()) raise(ErrorCode::kParse, "keyword set is not a JSON array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) raise(ErrorCode::kParse, "keyword set entry is not a string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

KeywordMatcher::KeywordMatcher(const std::vector<std::string>& keywords) {
  std::unordered_set<std::string> seen;
  for (const auto& raw : keywords) {
    std::string k = normalize_keyword(raw);
    if (k.empty() || !seen.insert(k).second) continue;
    Compiled c;
    c.cjk = has_cjk(k);
    if (!c.cjk) c.tokens = tokenize_folded(k);
    if (!c.cjk && c.tokens.empty()) continue;  // nothing that can ever match
    c.keyword = k;
    keywords_.push_back(k);
    compiled_.push_back(std::move(c));
  }
}

std::vector<std::string> KeywordMatcher::match(std::string_view text) const {
  std::vector<std::string> out;
  if (compiled_.empty() || text.empty()) return out;
  std::string folded = fold_text(text);
  std::vector<std::string> tokens = tokenize_folded(folded);
  std::unordered_set<std::string_view> token_set(tokens.begin(), tokens.end());
  for (const auto& c : compiled_) {
    bool hit = false;
    if (c.cjk) {
      hit = folded.find(c.keyword) != std::string::npos;
    } else if (c.tokens.size() == 1) {
      hit = token_set.count(c.tokens[0]) > 0;
    } else if (token_set.count(c.tokens[0])) {
      hit = std::search(tokens.begin(), tokens.end(), c.tokens.begin(), c.tokens.end()) != tokens.end();
    }
    if (hit) out.push_back(c.keyword);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace edna::covid
