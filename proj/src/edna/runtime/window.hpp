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
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "edna/core/record.hpp"
#include "edna/runtime/job_spec.hpp"

namespace edna::runtime {

// A record travelling through a job together with the ingest position it came
// from and the number of input records it accounts for.
struct TrackedRecord {
  StreamRecord record;
  std::uint64_t position = 0;
  std::uint64_t weight = 1;
};

// Schema tag of the record that carries one closed window downstream.
inline constexpr std::string_view kWindowBatchTag = "edna.window";

struct WindowBatch {
  Timestamp start{};
  Timestamp end{};
  std::vector<StreamRecord> records;

  bool operator==(const WindowBatch&) const = default;
};

// Payload: i64 start ms, i64 end ms, u32 count, then `count` record frames.
// event_time is the window start.
StreamRecord encode_window_batch(const WindowBatch& batch, std::string_view source_id);
// Throws kCorruptFrame when the record is not a well-formed window batch.
WindowBatch decode_window_batch(const StreamRecord& record);
bool is_window_batch(const StreamRecord& record) noexcept;

// Floor of t to a multiple of width, also for negative times.
std::int64_t window_start_ms(std::int64_t t_ms, std::int64_t width_ms) noexcept;

class WindowOperator {
 public:
  struct Output {
    // Closed windows, ordered by start, as window-batch records.
    std::vector<TrackedRecord> batches;
    // Records whose window had already closed.
    std::vector<TrackedRecord> late;
    // Weight of records dropped as in-window key duplicates.
    std::uint64_t deduped_weight = 0;
  };

  WindowOperator(WindowSpec spec, std::string source_id);

  void add(TrackedRecord item, Output& out);
  // End of stream: closes every open window.
  void flush(Output& out);

  // Smallest ingest position still held, if any. Committing past it would
  // lose the held records on a crash.
  std::optional<std::uint64_t> min_held_position() const;
  std::uint64_t held() const noexcept { return held_; }

 private:
  struct Open {
    std::vector<TrackedRecord> items;
    std::unordered_set<std::string> keys;
  };

  void close(std::map<std::int64_t, Open>::iterator it, Output& out);

  WindowSpec spec_;
  std::string source_id_;
  std::map<std::int64_t, Open> open_;
  std::optional<std::int64_t> watermark_;
  std::multiset<std::uint64_t> positions_;
  std::uint64_t held_ = 0;
};

}  // namespace edna::runtime
