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

namespace edna::broker {

enum class FlushPolicy {
  kEveryAppend,  // fdatasync before every acknowledgement
  kInterval,     // write(2) before acknowledgement, fdatasync on a timer
};

struct BrokerOptions {
  std::uint64_t segment_bytes = 64ull * 1024 * 1024;
  FlushPolicy flush = FlushPolicy::kEveryAppend;
  std::chrono::milliseconds flush_interval{200};
  // Inspection mode: no files are created or truncated; appends and commits
  // are rejected.
  bool read_only = false;
};

}  // namespace edna::broker
