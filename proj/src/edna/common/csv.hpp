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

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace edna {

// Column-named string table; the common result shape of stats and inspect.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180: CRLF record separators, fields quoted only when needed.
std::string csv_escape(std::string_view field);
void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);

// Parses RFC 4180 text (header row first). Throws kParse on malformed input.
Table parse_csv(std::string_view text);

}  // namespace edna
