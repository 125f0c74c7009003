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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "edna/common/time.hpp"
#include "edna/runtime/config.hpp"

namespace edna::runtime {

struct PluginSpec {
  std::string plugin;
  PluginConfig config;

  bool operator==(const PluginSpec&) const = default;
};

// Output cardinality: map 1->1, filter 1->0/1, flatmap 1->n, window n->1.
enum class ProcessKind { kMap, kFilter, kFlatMap, kWindow };

const char* to_string(ProcessKind kind) noexcept;
bool parse_process_kind(std::string_view text, ProcessKind& out) noexcept;

struct ProcessSpec {
  ProcessKind kind = ProcessKind::kMap;
  std::string plugin;
  PluginConfig config;

  bool operator==(const ProcessSpec&) const = default;
};

// One ingest-process-emit loop.
struct JobSpec {
  std::string job_id;
  PluginSpec ingest;
  std::vector<ProcessSpec> process_chain;
  PluginSpec emit;
  std::string consumer_group;
  std::size_t batch_size = 256;
  std::size_t buffer_capacity = 1024;

  bool operator==(const JobSpec&) const = default;
};

enum class WindowMode { kEventTimeTumbling, kCount };

struct WindowSpec {
  WindowMode mode = WindowMode::kEventTimeTumbling;
  Millis width{60'000};
  std::uint64_t count = 0;
  Millis allowed_lateness{5'000};
  // Drop records whose key already sits in the same open window.
  bool dedup_by_key = false;
};

// Window process steps name their mode as the plugin: "event-time-tumbling"
// (alias "tumbling") with width_ms / allowed_lateness_ms, or "count" with
// width. Throws kValidation.
WindowSpec window_spec_from(const ProcessSpec& spec);

// Throws kValidation when a JobSpec invariant does not hold.
void validate_job_spec(const JobSpec& spec);

}  // namespace edna::runtime
