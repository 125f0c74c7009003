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
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "edna/runtime/job_spec.hpp"
#include "edna/runtime/plugin.hpp"

namespace edna::runtime {

// Name -> factory tables. Unknown names fail when a job starts.
class PluginRegistry {
 public:
  using IngestFactory = std::function<std::unique_ptr<IngestPlugin>(const PluginContext&)>;
  using MapFactory = std::function<std::unique_ptr<MapPlugin>(const PluginContext&)>;
  using FilterFactory = std::function<std::unique_ptr<FilterPlugin>(const PluginContext&)>;
  using FlatMapFactory = std::function<std::unique_ptr<FlatMapPlugin>(const PluginContext&)>;
  using EmitFactory = std::function<std::unique_ptr<EmitPlugin>(const PluginContext&)>;

  void add_ingest(std::string name, IngestFactory f) { ingest_[std::move(name)] = std::move(f); }
  void add_map(std::string name, MapFactory f) { map_[std::move(name)] = std::move(f); }
  void add_filter(std::string name, FilterFactory f) { filter_[std::move(name)] = std::move(f); }
  void add_flatmap(std::string name, FlatMapFactory f) { flatmap_[std::move(name)] = std::move(f); }
  void add_emit(std::string name, EmitFactory f) { emit_[std::move(name)] = std::move(f); }

  bool has_ingest(const std::string& name) const { return ingest_.count(name) != 0; }
  bool has_emit(const std::string& name) const { return emit_.count(name) != 0; }
  bool has_process(ProcessKind kind, const std::string& name) const;

  // Each throws kPlugin naming the plugin when it is unknown or its
  // constructor fails.
  std::unique_ptr<IngestPlugin> make_ingest(const std::string& name, const PluginContext& ctx) const;
  std::unique_ptr<MapPlugin> make_map(const std::string& name, const PluginContext& ctx) const;
  std::unique_ptr<FilterPlugin> make_filter(const std::string& name, const PluginContext& ctx) const;
  std::unique_ptr<FlatMapPlugin> make_flatmap(const std::string& name, const PluginContext& ctx) const;
  std::unique_ptr<EmitPlugin> make_emit(const std::string& name, const PluginContext& ctx) const;

  std::vector<std::string> names() const;

 private:
  std::map<std::string, IngestFactory> ingest_;
  std::map<std::string, MapFactory> map_;
  std::map<std::string, FilterFactory> filter_;
  std::map<std::string, FlatMapFactory> flatmap_;
  std::map<std::string, EmitFactory> emit_;
};

// Registers broker-topic, file and stream-socket ingest; identity and
// uppercase maps; key-hash-partition and schema-tag filters; split-lines
// flatmap; broker-topic, file, stdout and keyed-upsert-store emits.
void register_builtin_plugins(PluginRegistry& registry);

// 64-bit FNV-1a; key-hash partitioning uses hash(key) mod partitions.
std::uint64_t partition_hash(std::string_view bytes) noexcept;

}  // namespace edna::runtime
