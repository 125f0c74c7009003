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

#include "edna/runtime/registry.hpp"

#include "edna/common/error.hpp"

namespace edna::runtime {

namespace {

template <typename Map>
auto make(const Map& table, const char* role, const std::string& name, const PluginContext& ctx) {
  auto it = table.find(name);
  if (it == table.end()) {
    raise(ErrorCode::kPlugin, std::string("unknown ") + role + " plugin '" + name + "'");
  }
  try {
    auto plugin = it->second(ctx);
    if (!plugin) raise(ErrorCode::kPlugin, "factory returned nothing");
    return plugin;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPlugin && std::string_view(e.what()).starts_with(role)) throw;
    raise(ErrorCode::kPlugin,
          std::string(role) + " plugin '" + name + "' failed to start: " + e.what());
  } catch (const std::exception& e) {
    raise(ErrorCode::kPlugin,
          std::string(role) + " plugin '" + name + "' failed to start: " + e.what());
  }
}

}  // namespace

bool PluginRegistry::has_process(ProcessKind kind, const std::string& name) const {
  switch (kind) {
    case ProcessKind::kMap: return map_.count(name) != 0;
    case ProcessKind::kFilter: return filter_.count(name) != 0;
    case ProcessKind::kFlatMap: return flatmap_.count(name) != 0;
    case ProcessKind::kWindow: return name == "event-time-tumbling" || name == "tumbling" ||
                                      name == "count";
  }
  return false;
}

std::unique_ptr<IngestPlugin> PluginRegistry::make_ingest(const std::string& name,
                                                          const PluginContext& ctx) const {
  return make(ingest_, "ingest", name, ctx);
}

std::unique_ptr<MapPlugin> PluginRegistry::make_map(const std::string& name,
                                                    const PluginContext& ctx) const {
  return make(map_, "map", name, ctx);
}

std::unique_ptr<FilterPlugin> PluginRegistry::make_filter(const std::string& name,
                                                          const PluginContext& ctx) const {
  return make(filter_, "filter", name, ctx);
}

std::unique_ptr<FlatMapPlugin> PluginRegistry::make_flatmap(const std::string& name,
                                                            const PluginContext& ctx) const {
  return make(flatmap_, "flatmap", name, ctx);
}

std::unique_ptr<EmitPlugin> PluginRegistry::make_emit(const std::string& name,
                                                      const PluginContext& ctx) const {
  return make(emit_, "emit", name, ctx);
}

std::vector<std::string> PluginRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : ingest_) out.push_back("ingest:" + n);
  for (const auto& [n, _] : map_) out.push_back("map:" + n);
  for (const auto& [n, _] : filter_) out.push_back("filter:" + n);
  for (const auto& [n, _] : flatmap_) out.push_back("flatmap:" + n);
  for (const auto& [n, _] : emit_) out.push_back("emit:" + n);
  return out;
}

}  // namespace edna::runtime
