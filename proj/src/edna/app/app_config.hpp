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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "edna/common/time.hpp"
#include "edna/runtime/config.hpp"
#include "edna/runtime/job_spec.hpp"

namespace edna::app {

struct Edge {
  std::string producer;
  std::string topic;
  std::string consumer;

  bool operator==(const Edge&) const = default;
};

// Jobs connected by broker topics. A job reads a topic when its ingest
// plugin is "broker-topic" and writes one when its emit plugin is.
struct AppGraph {
  std::string app_id;
  std::vector<runtime::JobSpec> jobs;
  std::vector<Edge> edges;
  // Jobs whose ingest / emit is not a broker topic.
  std::vector<std::string> external_sources;
  std::vector<std::string> external_sinks;
  // Topics that exist outside the application and need no producer.
  std::set<std::string> declared_topics;

  const runtime::JobSpec* find_job(std::string_view id) const;
  // Every topic some job reads or writes, plus the declared ones.
  std::set<std::string> topics() const;
};

inline constexpr std::string_view kBrokerTopicPlugin = "broker-topic";

// Topic a job reads from / writes to, empty when the side is external.
std::string consumed_topic(const runtime::JobSpec& job);
std::string produced_topic(const runtime::JobSpec& job);

// Fills edges and external source/sink lists from the jobs.
void derive_edges(AppGraph& graph);

struct RestartPolicy {
  std::size_t max_restarts = 3;
  // Restarts older than this no longer count against max_restarts.
  Millis window{60'000};
  // Delay before restart n uses entry min(n, size) - 1.
  std::vector<Millis> backoff{Millis{100}, Millis{500}, Millis{2'000}};
};

enum class DeployMode { kEmbedded, kStandalone };

struct BrokerSettings {
  std::string root;  // empty: caller decides
  std::uint64_t segment_bytes = 64ull * 1024 * 1024;
  bool flush_every_append = false;
  Millis flush_interval{200};
};

struct AppConfig {
  AppGraph graph;
  DeployMode mode = DeployMode::kEmbedded;
  BrokerSettings broker;
  Millis cache_poll_interval{10'000};
  RestartPolicy restart;
  // Values of the [app] section not interpreted here, kept verbatim.
  runtime::PluginConfig app_values;
};

// Parses the application document:
//
//   # comment
//   [app]      id, mode ("embedded" | "standalone")
//   [broker]   root, segment_bytes, flush ("every-append" | "interval"),
//              flush_interval_ms, topics (pre-existing topics)
//   [cache]    poll_interval_ms
//   [restart]  max_restarts, window_ms, backoff_ms
//   [job]      id, ingest.plugin, ingest.config.<k>, process[n].kind,
//              process[n].plugin, process[n].config.<k>, emit.plugin,
//              emit.config.<k>, group, batch_size, buffer_capacity
//
// Values: "string", number, true/false, or ["list", "of", "strings"].
// Throws kParse with the line number on syntax errors and kValidation for
// duplicate job ids or unknown keys.
AppConfig parse_app_config(std::string_view text);
AppConfig load_app_config(const std::string& path);

}  // namespace edna::app
