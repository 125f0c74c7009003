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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace edna::runtime {

struct MetricsSnapshot {
  // Counts weigh each record by the number of input records it stands for,
  // so records_in = records_out + dropped + dead_lettered once the job has
  // drained.
  std::uint64_t records_in = 0;
  std::uint64_t records_out = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dead_lettered = 0;
  std::optional<std::uint64_t> last_committed_offset;
  // Records handed to the sink (a window batch counts once).
  std::uint64_t emitted = 0;
  // Records currently held inside windows.
  std::uint64_t held = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t max_in_flight = 0;
  // Times the ingest thread waited because the buffer was full.
  std::uint64_t ingest_pauses = 0;
  std::uint64_t batches = 0;
  // Counters reported by plugins, e.g. discard reasons.
  std::map<std::string, std::uint64_t> extra;
};

// "name<TAB>value" lines; last_committed_offset is "none" before the first
// commit.
std::string format_metrics(const MetricsSnapshot& m);
MetricsSnapshot parse_metrics(const std::string& text);
void write_metrics_file(const std::filesystem::path& path, const MetricsSnapshot& m);
MetricsSnapshot read_metrics_file(const std::filesystem::path& path);

class JobMetrics {
 public:
  std::atomic<std::uint64_t> records_in{0};
  std::atomic<std::uint64_t> records_out{0};
  std::atomic<std::uint64_t> dropped{0};
  std::atomic<std::uint64_t> dead_lettered{0};
  std::atomic<std::uint64_t> emitted{0};
  std::atomic<std::uint64_t> held{0};
  std::atomic<std::uint64_t> in_flight{0};
  std::atomic<std::uint64_t> max_in_flight{0};
  std::atomic<std::uint64_t> ingest_pauses{0};
  std::atomic<std::uint64_t> batches{0};
  std::atomic<bool> has_commit{false};
  std::atomic<std::uint64_t> last_committed{0};

  void note_in_flight(std::uint64_t value);
  void add_extra(std::string_view name, std::uint64_t delta);
  MetricsSnapshot snapshot() const;

 private:
  mutable std::mutex extra_mu_;
  std::map<std::string, std::uint64_t, std::less<>> extra_;
};

}  // namespace edna::runtime
