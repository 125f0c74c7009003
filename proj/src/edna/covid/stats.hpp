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
#include <map>
#include <string>
#include <string_view>

#include "edna/common/csv.hpp"
#include "edna/common/time.hpp"
#include "edna/runtime/keyed_store.hpp"

namespace edna::covid {

// Counts per UTC calendar month; table columns month,count, ascending.
class MonthlyCounts {
 public:
  void add(Timestamp t, std::uint64_t n = 1) { counts_[format_month(t)] += n; }
  Table table() const;
  std::uint64_t total() const;

 private:
  std::map<std::string, std::uint64_t> counts_;
};

// Counts per language; table columns lang,count,pct, descending by count
// (ties by code), pct = count/total in percent rounded to one decimal.
class LanguageCounts {
 public:
  void add(std::string_view lang, std::uint64_t n = 1) { counts_[std::string(lang)] += n; }
  Table table() const;
  std::uint64_t total() const;

 private:
  std::map<std::string, std::uint64_t> counts_;
};

// Percent with one decimal, half rounded up: (634, 1000) -> "63.4".
std::string format_percent(std::uint64_t count, std::uint64_t total);
// 8714684 -> "8,714,684"
std::string format_thousands(std::uint64_t v);

MonthlyCounts monthly_counts(runtime::KeyedStore& store);
LanguageCounts language_counts(runtime::KeyedStore& store);

// A weighted fixture in the shape "created_at,count" (CSV with header); one
// row may stand for many records.
MonthlyCounts monthly_counts_from_fixture(std::string_view csv_text);
// "lang,count"
LanguageCounts language_counts_from_fixture(std::string_view csv_text);

}  // namespace edna::covid
