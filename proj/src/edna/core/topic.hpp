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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace edna {

// Per-topic dense sequence number; the first record of a topic is 0.
using Offset = std::uint64_t;

// Validated topic identifier: [a-z0-9._-]{1,128}. Names starting with '_' and
// the path components "." and ".." are reserved by the on-disk layout.
class TopicName {
 public:
  explicit TopicName(std::string name);

  static bool is_valid(std::string_view name) noexcept;

  const std::string& str() const noexcept { return name_; }

  auto operator<=>(const TopicName&) const = default;

 private:
  std::string name_;
};

// Consumer group ids and job ids share a filesystem-safe charset:
// [A-Za-z0-9._-]{1,128}, not starting with '.' or '_'.
bool is_valid_identifier(std::string_view id) noexcept;

}  // namespace edna
