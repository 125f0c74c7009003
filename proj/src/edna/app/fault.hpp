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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edna/runtime/metrics.hpp"

namespace edna::app {

// "job=metadata,after=100,count=1": crash `job` once it has taken in
// `after` records since it (re)started, `count` times in total.
struct FaultSpec {
  std::string job;
  std::uint64_t after = 0;
  std::uint64_t count = 1;

  bool operator==(const FaultSpec&) const = default;
};

// Throws kValidation naming the offending field.
FaultSpec parse_fault_spec(std::string_view text);
std::string format_fault_spec(const FaultSpec& spec);

// Remaining crashes, shared by every incarnation of every job.
class FaultPlan {
 public:
  FaultPlan() = default;
  explicit FaultPlan(std::vector<FaultSpec> specs);

  // A before-commit hook that throws runtime::InjectedCrash when due.
  std::function<void(const std::string&, const runtime::MetricsSnapshot&)> hook_for(const std::string& job);
  // Takes one pending crash for `job` (count 1), for handing to a worker
  // process.
  std::optional<FaultSpec> take(const std::string& job);
  std::uint64_t remaining(const std::string& job) const;
  std::uint64_t fired() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<FaultSpec>> pending_;
  std::uint64_t fired_ = 0;
};

}  // namespace edna::app
