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

#include "edna/covid/article.hpp"

#include <algorithm>

#include <unicode/utf8.h>

#include "edna/common/error.hpp"
#include "edna/covid/text.hpp"

namespace edna::covid {
namespace {

bool valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t len = static_cast<int32_t>(s.size()), i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Heading> parse_headings(std::string_view doc) {
  if (!valid_utf8(doc)) raise(ErrorCode::kParse, "article is not valid UTF-8");
  std::vector<Heading> out;
  std::size_t line_no = 0;
  while (!doc.empty()) {
    ++line_no;
    auto nl = doc.find('\n');
    std::string_view line = trim(doc.substr(0, nl));
    doc = nl == std::string_view::npos ? std::string_view{} : doc.substr(nl + 1);
    if (line.empty() || line.front() != '=') continue;
    std::size_t lead = line.find_first_not_of('=');
    if (lead == std::string_view::npos) {
      raise(ErrorCode::kParse, "line " + std::to_string(line_no) + ": heading without a title");
    }
    std::size_t last = line.find_last_not_of('=');
    std::size_t trail = line.size() - 1 - last;
    if (lead != trail) {
      raise(ErrorCode::kParse, "line " + std::to_string(line_no) + ": unbalanced heading markup");
    }
    std::string_view title = trim(line.substr(lead, last + 1 - lead));
    if (title.empty()) {
      raise(ErrorCode::kParse, "line " + std::to_string(line_no) + ": heading without a title");
    }
    out.push_back(Heading{static_cast<int>(lead), std::string(title), line_no});
  }
  return out;
}

std::vector<std::string> extract_conspiracy_keywords(std::string_view doc) {
  std::vector<std::string> out;
  int section_level = 0;  // level of the open Conspiracy section, 0 if none
  for (const auto& h : parse_headings(doc)) {
    if (section_level && h.level <= section_level) section_level = 0;
    if (!section_level) {
      if (h.level == 2 && normalize_keyword(h.title) == "conspiracy") section_level = h.level;
      continue;
    }
    if (h.level == section_level + 1) {
      std::string k = normalize_keyword(h.title);
      if (!k.empty() && std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    }
  }
  return out;
}

}  // namespace edna::covid
