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
#include <string>

#include "edna/app/app_config.hpp"

namespace edna::app {

// Replaces ${name} in text. Unknown variables are left as they are.
std::string expand_text(const std::string& text, const std::map<std::string, std::string>& vars);
void expand_config(runtime::PluginConfig& config, const std::map<std::string, std::string>& vars);

// Replaces ${name} in every string value of every job config. Unknown
// variables are left as they are.
void expand_variables(AppGraph& graph, const std::map<std::string, std::string>& vars);

// Gives each broker-topic ingest the list of jobs producing its topic (unless
// configured), so it can tell when its input has ended. A non-empty run id
// goes to every broker-topic ingest and emit so end-of-stream markers from
// other runs are ignored.
void inject_producers(AppGraph& graph, const std::string& run_id = {});

struct RunOverrides {
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> window_width_ms;
  // Default refresh spacing for cache readers that do not set their own.
  std::optional<std::int64_t> cache_poll_interval_ms;
};

// budget/seed go to synthetic-generator ingests, the width to event-time
// windows, the cache poll interval to misinformation taggers.
void apply_overrides(AppGraph& graph, const RunOverrides& overrides);

}  // namespace edna::app
