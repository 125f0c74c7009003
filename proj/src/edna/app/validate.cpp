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

#include "edna/app/validate.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "edna/common/error.hpp"
#include "edna/core/topic.hpp"

namespace edna::app {

namespace {

struct Indexed {
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> adj;
};

Indexed index_graph(const AppGraph& g) {
  Indexed x;
  for (std::size_t i = 0; i < g.jobs.size(); ++i) x.index.emplace(g.jobs[i].job_id, i);
  x.adj.resize(g.jobs.size());
  for (const auto& e : g.edges) {
    auto p = x.index.find(e.producer);
    auto c = x.index.find(e.consumer);
    if (p == x.index.end() || c == x.index.end()) continue;
    auto& out = x.adj[p->second];
    if (std::find(out.begin(), out.end(), c->second) == out.end()) out.push_back(c->second);
  }
  return x;
}

}  // namespace

std::string format_violation(const Violation& v) {
  return std::string(v.severity == Severity::kError ? "error: " : "warning: ") + v.kind + ": " +
         v.message;
}

std::vector<std::size_t> find_cycle(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  enum Color : unsigned char { kWhite, kGrey, kBlack };
  std::vector<Color> color(n, kWhite);
  std::vector<std::size_t> parent(n, n);
  // Iterative DFS; the stack holds (node, next child index).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    stack.push_back({root, 0});
    color[root] = kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < adj[node].size()) {
        std::size_t child = adj[node][next++];
        if (color[child] == kGrey) {
          std::vector<std::size_t> cycle;
          for (std::size_t v = node; v != child; v = parent[v]) cycle.push_back(v);
          cycle.push_back(child);
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
        if (color[child] == kWhite) {
          color[child] = kGrey;
          parent[child] = node;
          stack.push_back({child, 0});
        }
      } else {
        color[node] = kBlack;
        stack.pop_back();
      }
    }
  }
  return {};
}

std::vector<Violation> validate(const AppGraph& g, const runtime::PluginRegistry* registry) {
  std::vector<Violation> out;
  auto add = [&](std::string kind, std::string msg, Severity s = Severity::kError) {
    out.push_back(Violation{std::move(kind), s, std::move(msg), {}});
  };

  for (const auto& j : g.jobs) {
    try {
      runtime::validate_job_spec(j);
    } catch (const Error& e) {
      add("invalid-job", e.what());
    }
    if (j.ingest.plugin == kBrokerTopicPlugin && !TopicName::is_valid(consumed_topic(j))) {
      add("invalid-topic", "job '" + j.job_id + "' reads invalid topic '" + consumed_topic(j) + "'");
    }
    if (j.emit.plugin == kBrokerTopicPlugin && !TopicName::is_valid(produced_topic(j))) {
      add("invalid-topic", "job '" + j.job_id + "' writes invalid topic '" + produced_topic(j) + "'");
    }
    if (registry) {
      if (!registry->has_ingest(j.ingest.plugin)) {
        add("unknown-plugin", "job '" + j.job_id + "': unknown ingest plugin '" + j.ingest.plugin + "'");
      }
      for (const auto& p : j.process_chain) {
        if (!registry->has_process(p.kind, p.plugin)) {
          add("unknown-plugin", "job '" + j.job_id + "': unknown " + runtime::to_string(p.kind) +
                                    " plugin '" + p.plugin + "'");
        }
      }
      if (!registry->has_emit(j.emit.plugin)) {
        add("unknown-plugin", "job '" + j.job_id + "': unknown emit plugin '" + j.emit.plugin + "'");
      }
    }
  }

  Indexed x = index_graph(g);
  auto cycle = find_cycle(g.jobs.size(), x.adj);
  if (!cycle.empty()) {
    Violation v{"cycle", Severity::kError, "", {}};
    for (std::size_t i : cycle) v.path.push_back(g.jobs[i].job_id);
    for (const auto& id : v.path) v.message += id + " -> ";
    v.message += v.path.front();
    out.push_back(std::move(v));
  }

  if (g.external_sources.empty()) add("missing-ingest-job", "no job ingests from an external source");
  if (g.external_sinks.empty()) add("missing-emit-job", "no job emits to an external sink");

  std::set<std::string> produced = g.declared_topics;
  for (const auto& j : g.jobs) {
    if (auto t = produced_topic(j); !t.empty()) produced.insert(t);
  }
  for (const auto& j : g.jobs) {
    std::string t = consumed_topic(j);
    if (!t.empty() && !produced.count(t)) {
      add("orphan-topic", "topic '" + t + "' is consumed by job '" + j.job_id +
                              "' but no job produces it and it is not declared");
    }
  }

  // Reachability from external sources and declared topics.
  std::vector<bool> seen(g.jobs.size(), false);
  std::queue<std::size_t> q;
  for (std::size_t i = 0; i < g.jobs.size(); ++i) {
    std::string t = consumed_topic(g.jobs[i]);
    if (t.empty() || g.declared_topics.count(t)) {
      seen[i] = true;
      q.push(i);
    }
  }
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (std::size_t w : x.adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
    }
  }
  for (std::size_t i = 0; i < g.jobs.size(); ++i) {
    if (!seen[i]) {
      add("unreachable-job", "job '" + g.jobs[i].job_id + "' is not reachable from any external source",
          Severity::kWarning);
    }
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::kError; });
}

std::vector<std::string> topological_order(const AppGraph& g) {
  Indexed x = index_graph(g);
  std::vector<std::size_t> indegree(g.jobs.size(), 0);
  for (const auto& out : x.adj) {
    for (std::size_t w : out) ++indegree[w];
  }
  // Smallest declaration index first keeps the order stable.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < g.jobs.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(g.jobs[v].job_id);
    for (std::size_t w : x.adj[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != g.jobs.size()) raise(ErrorCode::kValidation, "application graph has a cycle");
  return order;
}

}  // namespace edna::app
