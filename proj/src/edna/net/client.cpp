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

#include "edna/net/client.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <thread>

#include "edna/net/wire.hpp"

namespace edna::net {

WireClient::WireClient(std::string address, std::chrono::milliseconds connect_timeout)
    : address_(std::move(address)), connect_timeout_(connect_timeout) {
  parse_address(address_);
}

void WireClient::connect_locked() { fd_ = connect_tcp(address_, connect_timeout_); }

Bytes WireClient::call(std::string_view request) {
  std::lock_guard lock(mu_);
  if (!fd_) connect_locked();
  Bytes response;
  try {
    write_message(fd_.get(), request);
    if (!read_message(fd_.get(), response)) {
      raise(ErrorCode::kUnavailable, "server closed connection");
    }
  } catch (const Error&) {
    fd_.reset();
    throw;
  }
  WireReader in(response);
  auto status = static_cast<ErrorCode>(in.u8());
  if (status != ErrorCode::kOk) {
    std::uint16_t len = in.u16();
    std::string_view rest(response);
    rest.remove_prefix(3);
    raise(status, std::string(rest.substr(0, len)));
  }
  return response.substr(1);
}

void RemoteBroker::create_topic(const TopicName& topic) {
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kCreate)).str8(topic.str());
  WireReader(client_->call(w.bytes())).expect_end();
}

Offset RemoteBroker::append_batch(const TopicName& topic, std::span<const StreamRecord> records) {
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kAppend))
      .str8(topic.str())
      .u32(static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) w.frame(r);
  Bytes response = client_->call(w.bytes());
  WireReader in(response);
  Offset first = in.u64();
  in.expect_end();
  return first;
}

std::vector<broker::FetchedRecord> RemoteBroker::fetch(const TopicName& topic, Offset from,
                                                       std::size_t max_records) {
  WireWriter w;
  auto max = static_cast<std::uint32_t>(std::min<std::size_t>(max_records, 0xffffffffu));
  w.u8(static_cast<std::uint8_t>(Opcode::kFetch)).str8(topic.str()).u64(from).u32(max);
  Bytes response = client_->call(w.bytes());
  WireReader in(response);
  std::uint32_t n = in.u32();
  std::vector<broker::FetchedRecord> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    broker::FetchedRecord r;
    r.offset = in.u64();
    r.record = in.frame();
    out.push_back(std::move(r));
  }
  in.expect_end();
  return out;
}

void RemoteBroker::commit_offset(std::string_view group, const TopicName& topic, Offset next) {
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kCommit)).str8(group).str8(topic.str()).u64(next);
  WireReader(client_->call(w.bytes())).expect_end();
}

std::optional<Offset> RemoteBroker::read_committed(std::string_view group,
                                                   const TopicName& topic) {
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kReadCommitted)).str8(group).str8(topic.str());
  Bytes response = client_->call(w.bytes());
  WireReader in(response);
  bool present = in.u8() != 0;
  Offset next = in.u64();
  in.expect_end();
  if (!present) return std::nullopt;
  return next;
}

std::uint64_t RemoteCache::put(std::string_view key, std::string_view value) {
  cache::validate_cache_key(key);
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kPut)).str8(key).bytes32(value);
  Bytes response = client_->call(w.bytes());
  WireReader in(response);
  std::uint64_t version = in.u64();
  in.expect_end();
  return version;
}

std::optional<cache::CacheEntry> RemoteCache::read_entry(std::string_view key,
                                                         std::string_view response) {
  WireReader in(response);
  if (in.u8() == 0) {
    in.expect_end();
    return std::nullopt;
  }
  cache::CacheEntry entry;
  entry.key = std::string(key);
  entry.version = in.u64();
  entry.updated_at = from_millis(static_cast<std::int64_t>(in.u64()));
  entry.value = in.bytes32();
  in.expect_end();
  return entry;
}

std::optional<cache::CacheEntry> RemoteCache::get(std::string_view key) {
  if (key.empty() || key.size() > cache::kMaxCacheKeyBytes) return std::nullopt;
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kGet)).str8(key);
  return read_entry(key, client_->call(w.bytes()));
}

std::optional<cache::CacheEntry> RemoteCache::get_if_newer(std::string_view key,
                                                           std::uint64_t than) {
  if (key.empty() || key.size() > cache::kMaxCacheKeyBytes) return std::nullopt;
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(Opcode::kGetIfNewer)).str8(key).u64(than);
  return read_entry(key, client_->call(w.bytes()));
}

}  // namespace edna::net
