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

#include "edna/app/prepare.hpp"

#include <set>

namespace edna::app {

using runtime::ConfigValue;
using runtime::PluginConfig;

std::string expand_text(const std::string& s, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "${") == 0) {
      auto close = s.find('}', i + 2);
      if (close != std::string::npos) {
        auto it = vars.find(s.substr(i + 2, close - i - 2));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += s[i++];
  }
  return out;
}

void expand_config(PluginConfig& c, const std::map<std::string, std::string>& vars) {
  PluginConfig next;
  for (const auto& [k, v] : c.values()) {
    if (v.kind() == ConfigValue::Kind::kString) {
      next.set(k, ConfigValue::string(expand_text(v.text(), vars)));
    } else if (v.kind() == ConfigValue::Kind::kList) {
      std::vector<std::string> items;
      for (const auto& item : v.items()) items.push_back(expand_text(item, vars));
      next.set(k, ConfigValue::list(std::move(items)));
    } else {
      next.set(k, v);
    }
  }
  c = std::move(next);
}

void expand_variables(AppGraph& graph, const std::map<std::string, std::string>& vars) {
  for (auto& j : graph.jobs) {
    expand_config(j.ingest.config, vars);
    expand_config(j.emit.config, vars);
    for (auto& p : j.process_chain) expand_config(p.config, vars);
  }
  derive_edges(graph);
}

void inject_producers(AppGraph& graph, const std::string& run_id) {
  for (auto& j : graph.jobs) {
    if (!run_id.empty()) {
      if (j.ingest.plugin == kBrokerTopicPlugin) j.ingest.config.set("run", ConfigValue::string(run_id));
      if (j.emit.plugin == kBrokerTopicPlugin) j.emit.config.set("run", ConfigValue::string(run_id));
    }
    std::string t = consumed_topic(j);
    if (t.empty() || j.ingest.config.contains("producers")) continue;
    std::set<std::string> producers;
    for (const auto& e : graph.edges) {
      if (e.consumer == j.job_id && e.topic == t) producers.insert(e.producer);
    }
    if (!producers.empty()) {
      j.ingest.config.set("producers", ConfigValue::list({producers.begin(), producers.end()}));
    }
  }
}

void apply_overrides(AppGraph& graph, const RunOverrides& o) {
  for (auto& j : graph.jobs) {
    if (j.ingest.plugin == "synthetic-generator") {
      if (o.budget) j.ingest.config.set("budget", ConfigValue::number(std::to_string(*o.budget)));
      if (o.seed) j.ingest.config.set("seed", ConfigValue::number(std::to_string(*o.seed)));
    }
    if (o.cache_poll_interval_ms) {
      for (auto& p : j.process_chain) {
        if (p.plugin == "misinformation-tag" && !p.config.contains("poll_interval_ms")) {
          p.config.set("poll_interval_ms", ConfigValue::number(std::to_string(*o.cache_poll_interval_ms)));
        }
      }
    }
    if (o.window_width_ms) {
      for (auto& p : j.process_chain) {
        if (p.kind == runtime::ProcessKind::kWindow && p.plugin != "count") {
          p.config.set("width_ms", ConfigValue::number(std::to_string(*o.window_width_ms)));
        }
      }
    }
  }
}

}  // namespace edna::app
