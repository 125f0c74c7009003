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

#include "edna/covid/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "edna/common/error.hpp"

namespace edna::covid {
namespace {

const icu::Normalizer2& folder() {
  static const icu::Normalizer2* n = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* p = icu::Normalizer2::getNFKCCasefoldInstance(status);
    if (U_FAILURE(status)) raise(ErrorCode::kInternal, "ICU NFKC_Casefold unavailable");
    return p;
  }();
  return *n;
}

bool is_token_char(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) || u_isdigit(c) || c == u'-' || c == 0x2010;
}

// Walks code points; fn(start, end, c) with byte offsets.
template <typename Fn>
void for_each_cp(std::string_view s, Fn&& fn) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  int32_t len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    fn(static_cast<std::size_t>(start), static_cast<std::size_t>(i), c);
  }
}

}  // namespace

std::string fold_text(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString out = folder().normalize(src, status);
  if (U_FAILURE(status)) raise(ErrorCode::kInternal, "normalization failed");
  std::string r;
  out.toUTF8String(r);
  return r;
}

std::string normalize_keyword(std::string_view keyword) {
  std::string folded = fold_text(keyword);
  std::string out;
  bool pending_space = false;
  for_each_cp(folded, [&](std::size_t b, std::size_t e, UChar32 c) {
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      return;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(folded, b, e - b);
  });
  return out;
}

std::vector<std::string> tokenize_folded(std::string_view folded) {
  std::vector<std::string> tokens;
  std::size_t tok_start = 0;
  bool in_token = false;
  for_each_cp(folded, [&](std::size_t b, std::size_t, UChar32 c) {
    bool t = is_token_char(c);
    if (t && !in_token) tok_start = b;
    if (!t && in_token) tokens.emplace_back(folded.substr(tok_start, b - tok_start));
    in_token = t;
  });
  if (in_token) tokens.emplace_back(folded.substr(tok_start));
  return tokens;
}

bool has_cjk(std::string_view text) {
  bool found = false;
  for_each_cp(text, [&](std::size_t, std::size_t, UChar32 c) {
    UErrorCode status = U_ZERO_ERROR;
    UScriptCode sc = uscript_getScript(c, &status);
    if (sc == USCRIPT_HAN || sc == USCRIPT_HIRAGANA || sc == USCRIPT_KATAKANA) found = true;
  });
  return found;
}

}  // namespace edna::covid
