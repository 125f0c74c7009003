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
#include <functional>
#include <optional>
#include <string_view>

#include "edna/common/time.hpp"

namespace edna::runtime {

struct RetryPolicy {
  Millis base{100};
  Millis cap{30'000};
  // Each delay is scaled by a uniform factor in [1 - jitter, 1 + jitter].
  double jitter = 0.2;
  // nullopt retries forever.
  std::optional<std::size_t> max_attempts;
};

// Delay before retry number `attempt` (1-based): base * 2^(attempt-1),
// capped, then jittered.
Millis backoff_delay(const RetryPolicy& policy, std::size_t attempt);

// Runs `fn` until it succeeds. Retryable edna::Error failures are logged and
// retried after backoff; anything else propagates at once. Gives up (kState)
// when `stopping` turns true, and rethrows the last error once max_attempts
// is exhausted.
void retry_call(const RetryPolicy& policy, std::string_view what,
                const std::function<void()>& fn,
                const std::function<bool()>& stopping = [] { return false; });

// Sleeps up to `d`, waking early when `stopping` turns true. Returns false if
// woken by stop.
bool interruptible_sleep(Millis d, const std::function<bool()>& stopping);

}  // namespace edna::runtime
