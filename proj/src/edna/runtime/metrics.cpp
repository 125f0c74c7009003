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

#include "edna/runtime/metrics.hpp"

#include <sstream>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"

namespace edna::runtime {

std::string format_metrics(const MetricsSnapshot& m) {
  std::ostringstream out;
  out << "records_in\t" << m.records_in << "\n"
      << "records_out\t" << m.records_out << "\n"
      << "dropped\t" << m.dropped << "\n"
      << "dead_lettered\t" << m.dead_lettered << "\n"
      << "last_committed_offset\t"
      << (m.last_committed_offset ? std::to_string(*m.last_committed_offset) : "none") << "\n"
      << "emitted\t" << m.emitted << "\n"
      << "held\t" << m.held << "\n"
      << "in_flight\t" << m.in_flight << "\n"
      << "max_in_flight\t" << m.max_in_flight << "\n"
      << "ingest_pauses\t" << m.ingest_pauses << "\n"
      << "batches\t" << m.batches << "\n";
  for (const auto& [name, v] : m.extra) out << name << "\t" << v << "\n";
  return out.str();
}

MetricsSnapshot parse_metrics(const std::string& text) {
  MetricsSnapshot m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string name = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (name == "last_committed_offset") {
      if (value != "none") m.last_committed_offset = std::stoull(value);
      continue;
    }
    std::uint64_t v = 0;
    try {
      v = std::stoull(value);
    } catch (const std::exception&) {
      raise(ErrorCode::kParse, "bad metrics line: " + line);
    }
    if (name == "records_in") m.records_in = v;
    else if (name == "records_out") m.records_out = v;
    else if (name == "dropped") m.dropped = v;
    else if (name == "dead_lettered") m.dead_lettered = v;
    else if (name == "emitted") m.emitted = v;
    else if (name == "held") m.held = v;
    else if (name == "in_flight") m.in_flight = v;
    else if (name == "max_in_flight") m.max_in_flight = v;
    else if (name == "ingest_pauses") m.ingest_pauses = v;
    else if (name == "batches") m.batches = v;
    else m.extra[name] = v;
  }
  return m;
}

void write_metrics_file(const std::filesystem::path& path, const MetricsSnapshot& m) {
  atomic_write_file(path, format_metrics(m));
}

MetricsSnapshot read_metrics_file(const std::filesystem::path& path) {
  return parse_metrics(read_file(path));
}

void JobMetrics::note_in_flight(std::uint64_t value) {
  in_flight.store(value);
  std::uint64_t prev = max_in_flight.load();
  while (value > prev && !max_in_flight.compare_exchange_weak(prev, value)) {
  }
}

void JobMetrics::add_extra(std::string_view name, std::uint64_t delta) {
  std::lock_guard lock(extra_mu_);
  auto it = extra_.find(name);
  if (it == extra_.end()) extra_.emplace(std::string(name), delta);
  else it->second += delta;
}

MetricsSnapshot JobMetrics::snapshot() const {
  MetricsSnapshot m;
  m.records_in = records_in.load();
  m.records_out = records_out.load();
  m.dropped = dropped.load();
  m.dead_lettered = dead_lettered.load();
  if (has_commit.load()) m.last_committed_offset = last_committed.load();
  m.emitted = emitted.load();
  m.held = held.load();
  m.in_flight = in_flight.load();
  m.max_in_flight = max_in_flight.load();
  m.ingest_pauses = ingest_pauses.load();
  m.batches = batches.load();
  std::lock_guard lock(extra_mu_);
  m.extra.insert(extra_.begin(), extra_.end());
  return m;
}

}  // namespace edna::runtime
