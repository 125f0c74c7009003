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

#include "edna/runtime/job_spec.hpp"

#include "edna/common/error.hpp"
#include "edna/core/topic.hpp"

namespace edna::runtime {

const char* to_string(ProcessKind kind) noexcept {
  switch (kind) {
    case ProcessKind::kMap: return "map";
    case ProcessKind::kFilter: return "filter";
    case ProcessKind::kFlatMap: return "flatmap";
    case ProcessKind::kWindow: return "window";
  }
  return "?";
}

bool parse_process_kind(std::string_view text, ProcessKind& out) noexcept {
  if (text == "map") out = ProcessKind::kMap;
  else if (text == "filter") out = ProcessKind::kFilter;
  else if (text == "flatmap") out = ProcessKind::kFlatMap;
  else if (text == "window") out = ProcessKind::kWindow;
  else return false;
  return true;
}

WindowSpec window_spec_from(const ProcessSpec& spec) {
  WindowSpec w;
  const PluginConfig& c = spec.config;
  if (spec.plugin == "event-time-tumbling" || spec.plugin == "tumbling") {
    w.mode = WindowMode::kEventTimeTumbling;
    w.width = Millis{c.get_int("width_ms", 60'000)};
    w.allowed_lateness = Millis{c.get_int("allowed_lateness_ms", 5'000)};
    if (w.width.count() <= 0) raise(ErrorCode::kValidation, "window width_ms must be > 0");
    if (w.allowed_lateness.count() < 0) {
      raise(ErrorCode::kValidation, "window allowed_lateness_ms must be >= 0");
    }
  } else if (spec.plugin == "count") {
    w.mode = WindowMode::kCount;
    std::int64_t n = c.get_int("width", 0);
    if (n <= 0) raise(ErrorCode::kValidation, "count window width must be > 0");
    w.count = static_cast<std::uint64_t>(n);
  } else {
    raise(ErrorCode::kValidation, "unknown window mode '" + spec.plugin + "'");
  }
  w.dedup_by_key = c.get_bool("dedup_by_key", false);
  return w;
}

void validate_job_spec(const JobSpec& spec) {
  if (!is_valid_identifier(spec.job_id)) {
    raise(ErrorCode::kValidation, "invalid job id '" + spec.job_id + "'");
  }
  // The dead-letter topic is named after the job.
  if (!TopicName::is_valid(spec.job_id + ".dlq")) {
    raise(ErrorCode::kValidation,
          "job id '" + spec.job_id + "' must be usable as a topic name (lowercase)");
  }
  if (spec.ingest.plugin.empty()) raise(ErrorCode::kValidation, "job " + spec.job_id + ": no ingest");
  if (spec.emit.plugin.empty()) raise(ErrorCode::kValidation, "job " + spec.job_id + ": no emit");
  if (spec.batch_size == 0) raise(ErrorCode::kValidation, "job " + spec.job_id + ": batch_size 0");
  if (spec.buffer_capacity == 0) {
    raise(ErrorCode::kValidation, "job " + spec.job_id + ": buffer_capacity 0");
  }
  if (!spec.consumer_group.empty() && !is_valid_identifier(spec.consumer_group)) {
    raise(ErrorCode::kValidation, "job " + spec.job_id + ": invalid group '" +
                                      spec.consumer_group + "'");
  }
  for (const ProcessSpec& p : spec.process_chain) {
    if (p.kind == ProcessKind::kWindow) window_spec_from(p);
    else if (p.plugin.empty()) {
      raise(ErrorCode::kValidation, "job " + spec.job_id + ": process step without plugin");
    }
  }
}

}  // namespace edna::runtime
