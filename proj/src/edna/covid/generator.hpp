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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "edna/common/time.hpp"
#include "edna/core/record.hpp"

namespace edna::covid {

struct ScheduleSegment {
  Timestamp start{};
  std::map<std::string, double> prevalence;  // keyword -> P(included)
  std::map<std::string, double> languages;   // code -> mixture weight
};

struct DriftProfile {
  std::vector<ScheduleSegment> schedule;
  std::uint64_t seed = 0;
  double rate = 10.0;            // records per simulated second, before sampling
  double sampling_ratio = 1.0;   // share of the full stream the generator emits
  Timestamp start{};             // time of record 0; defaults to the first segment
  double truncated_rate = 0.005; // truncated JSON
  double empty_rate = 0.005;     // text ""
  double retweet_rate = 0.0;     // retweets of an earlier record, no keywords of their own
};

// JSON form:
//   {"seed": 1, "rate": 50, "sampling_ratio": 1, "start": "2020-01-01T00:00:00Z",
//    "malformed_rate": 0.01, "retweet_rate": 0,
//    "schedule": [{"start": "...", "prevalence": {"wuhan": 0.3},
//                  "languages": {"en": 0.7, "es": 0.3}}, ...]}
// malformed_rate is split evenly between truncated and empty records unless
// truncated_rate / empty_rate are given. Throws kValidation naming the field.
DriftProfile parse_drift_profile(std::string_view json_text);
DriftProfile load_drift_profile(const std::filesystem::path& path);
void validate_drift_profile(const DriftProfile& profile);

enum class Injection { kNone, kTruncated, kEmpty, kRetweet };

struct Generated {
  StreamRecord record;
  Injection injection = Injection::kNone;
  std::uint64_t tweet_id = 0;
  std::vector<std::string> keywords;  // inserted into the text
};

// Deterministic: record i depends only on the profile and i.
class TweetGenerator {
 public:
  static constexpr std::uint64_t kIdBase = 1210000000000000000ull;

  explicit TweetGenerator(DriftProfile profile, std::string source_id = "generator");

  Generated generate(std::uint64_t index) const;
  StreamRecord record(std::uint64_t index) const { return generate(index).record; }
  Timestamp time_of(std::uint64_t index) const;
  const ScheduleSegment& segment_at(Timestamp t) const;
  std::size_t segment_index(Timestamp t) const;
  const DriftProfile& profile() const noexcept { return profile_; }

 private:
  DriftProfile profile_;
  std::string source_id_;
  double interval_ms_;
};

// Writes `budget` records as a frame file readable by the file ingest.
void write_corpus(const TweetGenerator& generator, std::uint64_t budget,
                  const std::filesystem::path& out);

}  // namespace edna::covid
