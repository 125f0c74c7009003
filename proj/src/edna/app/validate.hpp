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
#include <string>
#include <vector>

#include "edna/app/app_config.hpp"
#include "edna/runtime/registry.hpp"

namespace edna::app {

enum class Severity { kError, kWarning };

struct Violation {
  // cycle, missing-ingest-job, missing-emit-job, orphan-topic,
  // unreachable-job, unknown-plugin, invalid-job, invalid-topic
  std::string kind;
  Severity severity = Severity::kError;
  std::string message;
  // Job ids on the cycle, in edge order, for kind "cycle".
  std::vector<std::string> path;
};

// "error: cycle: a -> b -> a" / "warning: ..."
std::string format_violation(const Violation& v);

// Checks the DAG rules. With a registry, plugin names are checked too.
std::vector<Violation> validate(const AppGraph& graph,
                                const runtime::PluginRegistry* registry = nullptr);
bool has_errors(const std::vector<Violation>& violations);

// One cycle of the directed graph over nodes 0..n-1 (each node once, the last
// has an edge back to the first), or empty when the graph is acyclic.
std::vector<std::size_t> find_cycle(std::size_t n, const std::vector<std::vector<std::size_t>>& adj);

// Producers before consumers; ties keep declaration order. Throws
// kValidation when the graph has a cycle.
std::vector<std::string> topological_order(const AppGraph& graph);

}  // namespace edna::app
