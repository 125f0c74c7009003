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

// NFKC_Casefold of UTF-8 text. Invalid sequences become U+FFFD.
std::string fold_text(std::string_view text);

// fold_text, then trimmed with internal whitespace runs collapsed to one
// space. The canonical spelling of a keyword.
std::string normalize_keyword(std::string_view keyword);

// Tokens of already folded text: maximal runs of letters, digits and hyphens.
std::vector<std::string> tokenize_folded(std::string_view folded);

inline std::vector<std::string> tokenize(std::string_view text) {
  return tokenize_folded(fold_text(text));
}

// True if the text contains Han, Hiragana or Katakana characters; such
// keywords match as substrings.
bool has_cjk(std::string_view text);

}  // namespace edna::covid
