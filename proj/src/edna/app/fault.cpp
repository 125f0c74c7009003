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

#include "edna/app/fault.hpp"

#include <charconv>

#include "edna/common/error.hpp"
#include "edna/runtime/job.hpp"

namespace edna::app {

FaultSpec parse_fault_spec(std::string_view text) {
  FaultSpec spec;
  bool have_job = false;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      raise(ErrorCode::kValidation, "inject-fault: expected key=value, got '" + std::string(item) + "'");
    }
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "job") {
      if (value.empty()) raise(ErrorCode::kValidation, "inject-fault: empty job");
      spec.job = std::string(value);
      have_job = true;
      continue;
    }
    std::uint64_t n = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), n);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
      raise(ErrorCode::kValidation, "inject-fault: " + std::string(key) + " must be a non-negative integer");
    }
    if (key == "after") spec.after = n;
    else if (key == "count") spec.count = n;
    else raise(ErrorCode::kValidation, "inject-fault: unknown field '" + std::string(key) + "'");
  }
  if (!have_job) raise(ErrorCode::kValidation, "inject-fault: missing job=");
  return spec;
}

std::string format_fault_spec(const FaultSpec& s) {
  return "job=" + s.job + ",after=" + std::to_string(s.after) + ",count=" + std::to_string(s.count);
}

FaultPlan::FaultPlan(std::vector<FaultSpec> specs) {
  for (auto& s : specs) {
    if (s.count > 0) pending_[s.job].push_back(std::move(s));
  }
}

std::function<void(const std::string&, const runtime::MetricsSnapshot&)> FaultPlan::hook_for(
    const std::string& job) {
  return [this, job](const std::string& id, const runtime::MetricsSnapshot& m) {
    std::lock_guard lock(mu_);
    auto it = pending_.find(job);
    if (it == pending_.end() || it->second.empty()) return;
    FaultSpec& s = it->second.front();
    if (m.records_in < s.after) return;
    if (--s.count == 0) it->second.erase(it->second.begin());
    ++fired_;
    throw runtime::InjectedCrash{id};
  };
}

std::optional<FaultSpec> FaultPlan::take(const std::string& job) {
  std::lock_guard lock(mu_);
  auto it = pending_.find(job);
  if (it == pending_.end() || it->second.empty()) return std::nullopt;
  FaultSpec& s = it->second.front();
  FaultSpec one{s.job, s.after, 1};
  if (--s.count == 0) it->second.erase(it->second.begin());
  ++fired_;
  return one;
}

std::uint64_t FaultPlan::remaining(const std::string& job) const {
  std::lock_guard lock(mu_);
  auto it = pending_.find(job);
  std::uint64_t n = 0;
  if (it != pending_.end()) {
    for (const auto& s : it->second) n += s.count;
  }
  return n;
}

std::uint64_t FaultPlan::fired() const {
  std::lock_guard lock(mu_);
  return fired_;
}

}  // namespace edna::app
