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

#include "edna/runtime/retry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "edna/common/error.hpp"
#include "edna/common/log.hpp"

namespace edna::runtime {

Millis backoff_delay(const RetryPolicy& policy, std::size_t attempt) {
  double base = static_cast<double>(policy.base.count());
  double cap = static_cast<double>(policy.cap.count());
  double raw = std::min(cap, base * std::pow(2.0, static_cast<double>(attempt == 0 ? 0 : attempt - 1)));
  double factor = 1.0;
  if (policy.jitter > 0) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    std::uniform_real_distribution<double> dist(1.0 - policy.jitter, 1.0 + policy.jitter);
    factor = dist(rng);
  }
  return Millis{static_cast<std::int64_t>(std::min(cap, raw * factor))};
}

bool interruptible_sleep(Millis d, const std::function<bool()>& stopping) {
  auto until = std::chrono::steady_clock::now() + d;
  while (std::chrono::steady_clock::now() < until) {
    if (stopping()) return false;
    auto left = until - std::chrono::steady_clock::now();
    std::this_thread::sleep_for(std::min<std::chrono::steady_clock::duration>(left, Millis{20}));
  }
  return !stopping();
}

void retry_call(const RetryPolicy& policy, std::string_view what, const std::function<void()>& fn,
                const std::function<bool()>& stopping) {
  for (std::size_t attempt = 1;; ++attempt) {
    try {
      fn();
      return;
    } catch (const Error& e) {
      if (!is_retryable(e.code())) throw;
      if (policy.max_attempts && attempt >= *policy.max_attempts) {
        log().error("{}: giving up after {} attempts: {}", what, attempt, e.what());
        throw;
      }
      Millis d = backoff_delay(policy, attempt);
      log().warn("{}: attempt {} failed ({}), retrying in {} ms", what, attempt, e.what(), d.count());
      if (!interruptible_sleep(d, stopping)) {
        raise(ErrorCode::kState, std::string(what) + ": stopped while retrying: " + e.what());
      }
    }
  }
}

}  // namespace edna::runtime
