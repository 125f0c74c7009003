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

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "edna/broker/broker_api.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/common/file_util.hpp"

namespace edna::net {

// One request in flight at a time. A broken connection surfaces as
// kUnavailable and is re-established on the next call.
class WireClient {
 public:
  explicit WireClient(std::string address,
                      std::chrono::milliseconds connect_timeout = std::chrono::seconds(5));

  // Sends a request body and returns the OK response body without its
  // status byte. Error statuses are rethrown as edna::Error.
  Bytes call(std::string_view request);

  const std::string& address() const noexcept { return address_; }

 private:
  void connect_locked();

  std::string address_;
  std::chrono::milliseconds connect_timeout_;
  std::mutex mu_;
  UniqueFd fd_;
};

class RemoteBroker final : public broker::BrokerApi {
 public:
  explicit RemoteBroker(std::shared_ptr<WireClient> client) : client_(std::move(client)) {}

  void create_topic(const TopicName& topic) override;
  Offset append_batch(const TopicName& topic, std::span<const StreamRecord> records) override;
  std::vector<broker::FetchedRecord> fetch(const TopicName& topic, Offset from,
                                           std::size_t max_records) override;
  void commit_offset(std::string_view group, const TopicName& topic, Offset next) override;
  std::optional<Offset> read_committed(std::string_view group, const TopicName& topic) override;

 private:
  std::shared_ptr<WireClient> client_;
};

class RemoteCache final : public cache::CacheApi {
 public:
  explicit RemoteCache(std::shared_ptr<WireClient> client) : client_(std::move(client)) {}

  std::uint64_t put(std::string_view key, std::string_view value) override;
  std::optional<cache::CacheEntry> get(std::string_view key) override;
  std::optional<cache::CacheEntry> get_if_newer(std::string_view key,
                                                std::uint64_t than) override;

 private:
  std::optional<cache::CacheEntry> read_entry(std::string_view key, std::string_view response);

  std::shared_ptr<WireClient> client_;
};

}  // namespace edna::net
