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
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "edna/broker/broker_api.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/core/record.hpp"
#include "edna/runtime/config.hpp"

namespace edna::runtime {

class CheckpointStore;

// Everything a plugin may touch while it runs. The broker, cache and
// checkpoint store are shared and thread-safe; the plugin itself is owned by
// one job.
struct PluginContext {
  std::string job_id;
  std::string consumer_group;
  const PluginConfig* config = nullptr;
  std::shared_ptr<broker::BrokerApi> broker;
  std::shared_ptr<cache::CacheApi> cache;
  std::shared_ptr<CheckpointStore> checkpoints;
  // True once the job has been asked to stop; long waits inside plugins
  // should give up when it flips.
  std::function<bool()> stopping = [] { return false; };
  // Adds to a named counter in the job's metrics.
  std::function<void(std::string_view name, std::uint64_t delta)> count = [](std::string_view, std::uint64_t) {};
  // Relative paths in the config resolve against this directory.
  std::filesystem::path base_dir;

  const PluginConfig& cfg() const { return *config; }
  std::filesystem::path resolve(const std::string& path) const {
    std::filesystem::path p(path);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
};

// A record plus the source position it was read from.
struct SourceRecord {
  StreamRecord record;
  std::uint64_t position = 0;
};

struct PollResult {
  std::vector<SourceRecord> records;
  // Position just past everything this poll consumed, including control
  // records that produced no SourceRecord.
  std::uint64_t cursor = 0;
  bool end_of_stream = false;
};

class IngestPlugin {
 public:
  virtual ~IngestPlugin() = default;
  // Up to `max` records. Empty without end_of_stream means no data now.
  virtual PollResult poll(std::size_t max) = 0;
  // Everything before `next` has been emitted downstream.
  virtual void commit(std::uint64_t next) = 0;
  // Position the first poll reads from; the supervisor logs it on restart.
  virtual std::uint64_t start_position() const { return 0; }
};

class MapPlugin {
 public:
  virtual ~MapPlugin() = default;
  virtual StreamRecord apply(const StreamRecord& record) = 0;
};

class FilterPlugin {
 public:
  virtual ~FilterPlugin() = default;
  virtual bool keep(const StreamRecord& record) = 0;
};

class FlatMapPlugin {
 public:
  virtual ~FlatMapPlugin() = default;
  virtual void apply(const StreamRecord& record, std::vector<StreamRecord>& out) = 0;
  // Called at end of stream; may release records the plugin held back.
  virtual void flush(std::vector<StreamRecord>& /*out*/) {}
};

class EmitPlugin {
 public:
  virtual ~EmitPlugin() = default;
  // Returns only once the sink has accepted the whole batch.
  virtual void push(std::span<const StreamRecord> records) = 0;
  // The job finished its input; broker sinks announce end of stream.
  virtual void finish() {}
};

}  // namespace edna::runtime
