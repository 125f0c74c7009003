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

#include <string>
#include <string_view>
#include <vector>

namespace edna::covid {

struct Heading {
  int level = 0;  // number of '=' on each side
  std::string title;
  std::size_t line = 0;
};

// Headline markup: "== Section ==", "=== Sub-headline ===". Throws kParse
// for a heading whose '=' runs do not balance, or invalid UTF-8.
std::vector<Heading> parse_headings(std::string_view document);

// Sub-headline titles under the "Conspiracy" section (title compared after
// normalization), normalized as keywords, without duplicates. Empty when
// there is no such section.
std::vector<std::string> extract_conspiracy_keywords(std::string_view document);

}  // namespace edna::covid
