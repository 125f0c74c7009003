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
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edna/common/bytes.hpp"
#include "edna/common/time.hpp"

namespace edna::cache {

struct CacheEntry {
  std::string key;
  Bytes value;
  std::uint64_t version = 0;
  Timestamp updated_at{};

  bool operator==(const CacheEntry&) const = default;
};

// Cross-job key-value channel. Versions start at 1 and grow by one per put.
class CacheApi {
 public:
  virtual ~CacheApi() = default;

  // Returns the new version. Throws kValidation for an empty key.
  virtual std::uint64_t put(std::string_view key, std::string_view value) = 0;
  virtual std::optional<CacheEntry> get(std::string_view key) = 0;
  // The entry when its version is above `than`; nullopt means unchanged
  // (including when the key is absent).
  virtual std::optional<CacheEntry> get_if_newer(std::string_view key, std::uint64_t than) = 0;
};

// In-process, ephemeral implementation.
class StateCache final : public CacheApi {
 public:
  std::uint64_t put(std::string_view key, std::string_view value) override;
  std::optional<CacheEntry> get(std::string_view key) override;
  std::optional<CacheEntry> get_if_newer(std::string_view key, std::uint64_t than) override;

  // Entries sorted by key.
  std::vector<CacheEntry> snapshot() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, CacheEntry> entries_;
};

// Keys travel the wire with a one-byte length.
inline constexpr std::size_t kMaxCacheKeyBytes = 255;

void validate_cache_key(std::string_view key);

}  // namespace edna::cache
