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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace edna {

using Millis = std::chrono::milliseconds;
using Timestamp = std::chrono::sys_time<Millis>;

inline std::int64_t to_millis(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_millis(std::int64_t ms) { return Timestamp{Millis{ms}}; }

Timestamp now_utc();

// "2020-01-25T00:00:00.000Z"
std::string format_iso8601(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MM:SS[.fff](Z|+00:00)" and the bare date "YYYY-MM-DD".
std::optional<Timestamp> parse_iso8601(std::string_view text);

// "YYYY-MM" of the UTC calendar month containing t.
std::string format_month(Timestamp t);

// First millisecond of the UTC month (year, month 1..12).
Timestamp month_start(int year, unsigned month);

}  // namespace edna
