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

#include "edna/common/time.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

namespace edna {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return res.ec == std::errc{};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Timestamp now_utc() {
  return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

std::string format_iso8601(Timestamp t) {
  std::int64_t ms = to_millis(t);
  std::int64_t secs = floor_div(ms, 1000);
  int frac = static_cast<int>(ms - secs * 1000);
  std::time_t tt = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
  return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  int year = 0, mon = 0, day = 0, hh = 0, mm = 0, ss = 0, frac = 0;
  if (!read_int(s, 0, 4, year) || s.size() < 10 || s[4] != '-' || !read_int(s, 5, 2, mon) ||
      s[7] != '-' || !read_int(s, 8, 2, day)) {
    return std::nullopt;
  }
  std::size_t pos = 10;
  if (s.size() > 10) {
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    if (!read_int(s, 11, 2, hh) || s.size() < 19 || s[13] != ':' || !read_int(s, 14, 2, mm) ||
        s[16] != ':' || !read_int(s, 17, 2, ss)) {
      return std::nullopt;
    }
    pos = 19;
    if (pos < s.size() && s[pos] == '.') {
      std::size_t start = ++pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      std::size_t digits = pos - start;
      if (digits == 0 || digits > 9) return std::nullopt;
      std::string_view f = s.substr(start, digits < 3 ? digits : 3);
      std::from_chars(f.data(), f.data() + f.size(), frac);
      for (std::size_t i = f.size(); i < 3; ++i) frac *= 10;
    }
    std::string_view zone = s.substr(pos);
    if (zone != "Z" && zone != "+00:00" && zone != "") return std::nullopt;
  }
  if (mon < 1 || mon > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60) {
    return std::nullopt;
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hh;
  tm.tm_min = mm;
  tm.tm_sec = ss;
  std::time_t secs = timegm(&tm);
  // timegm normalizes out-of-range days (Feb 30 -> Mar 2); reject those.
  std::tm check{};
  gmtime_r(&secs, &check);
  if (check.tm_mday != day || check.tm_mon != mon - 1) return std::nullopt;
  return from_millis(static_cast<std::int64_t>(secs) * 1000 + frac);
}

std::string format_month(Timestamp t) {
  std::int64_t secs = floor_div(to_millis(t), 1000);
  std::time_t tt = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d", tm.tm_year + 1900, tm.tm_mon + 1);
  return buf;
}

Timestamp month_start(int year, unsigned month) {
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = static_cast<int>(month) - 1;
  tm.tm_mday = 1;
  return from_millis(static_cast<std::int64_t>(timegm(&tm)) * 1000);
}

}  // namespace edna
