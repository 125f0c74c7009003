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

#include "edna/cache/state_cache.hpp"

#include <algorithm>
#include <mutex>

#include "edna/common/error.hpp"

namespace edna::cache {

void validate_cache_key(std::string_view key) {
  if (key.empty()) raise(ErrorCode::kValidation, "cache key must not be empty");
  if (key.size() > kMaxCacheKeyBytes) {
    raise(ErrorCode::kValidation, "cache key longer than 255 bytes");
  }
}

std::uint64_t StateCache::put(std::string_view key, std::string_view value) {
  validate_cache_key(key);
  std::unique_lock lock(mu_);
  auto [it, inserted] = entries_.try_emplace(std::string(key));
  CacheEntry& entry = it->second;
  if (inserted) entry.key = std::string(key);
  entry.value.assign(value);
  entry.version += 1;
  entry.updated_at = now_utc();
  return entry.version;
}

std::optional<CacheEntry> StateCache::get(std::string_view key) {
  std::shared_lock lock(mu_);
  auto it = entries_.find(std::string(key));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<CacheEntry> StateCache::get_if_newer(std::string_view key, std::uint64_t than) {
  std::shared_lock lock(mu_);
  auto it = entries_.find(std::string(key));
  if (it == entries_.end() || it->second.version <= than) return std::nullopt;
  return it->second;
}

std::vector<CacheEntry> StateCache::snapshot() const {
  std::shared_lock lock(mu_);
  std::vector<CacheEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.push_back(entry);
  std::sort(out.begin(), out.end(),
            [](const CacheEntry& a, const CacheEntry& b) { return a.key < b.key; });
  return out;
}

}  // namespace edna::cache
