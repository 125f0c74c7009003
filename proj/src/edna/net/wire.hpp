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
#include <string>
#include <string_view>

#include <chrono>

#include "edna/common/bytes.hpp"
#include "edna/common/file_util.hpp"
#include "edna/common/error.hpp"
#include "edna/core/record.hpp"

namespace edna::net {

// Every message on the socket is a u32 big-endian body length followed by
// the body. Request bodies start with an opcode, response bodies with a
// status byte (ErrorCode numbering; 0 = OK).
enum class Opcode : std::uint8_t {
  kCreate = 0x01,         // str8 topic
  kAppend = 0x02,         // str8 topic, u32 count, count * frame  -> u64 first offset
  kFetch = 0x03,          // str8 topic, u64 from, u32 max  -> u32 n, n * (u64 offset, frame)
  kCommit = 0x04,         // str8 group, str8 topic, u64 next
  kReadCommitted = 0x05,  // str8 group, str8 topic  -> u8 present, u64 next
  kPut = 0x10,            // str8 key, bytes32 value  -> u64 version
  kGet = 0x11,            // str8 key  -> u8 present [u64 version, i64 updated_ms, bytes32 value]
  kGetIfNewer = 0x12,     // str8 key, u64 than  -> same as kGet; present=0 means unchanged
};

inline constexpr std::size_t kMaxMessageBytes = 64u * 1024 * 1024;
// Soft cap on a FETCH response; at least one record is always returned.
inline constexpr std::size_t kFetchResponseBudget = 8u * 1024 * 1024;

class WireWriter {
 public:
  WireWriter& u8(std::uint8_t v) { put_u8(buf_, v); return *this; }
  WireWriter& u16(std::uint16_t v) { put_u16(buf_, v); return *this; }
  WireWriter& u32(std::uint32_t v) { put_u32(buf_, v); return *this; }
  WireWriter& u64(std::uint64_t v) { put_u64(buf_, v); return *this; }
  WireWriter& str8(std::string_view s);
  WireWriter& bytes32(std::string_view b);
  WireWriter& frame(const StreamRecord& record) { append_frame(buf_, record); return *this; }

  Bytes take() { return std::move(buf_); }
  const Bytes& bytes() const { return buf_; }

 private:
  Bytes buf_;
};

// Bounds-checked cursor over a message body; underflow throws kProtocol.
class WireReader {
 public:
  explicit WireReader(std::string_view data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::string str8();
  Bytes bytes32();
  StreamRecord frame();
  void expect_end() const;
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;

  std::string_view data_;
  std::size_t pos_ = 0;
};

// Blocking message I/O on a connected socket. read_message returns false on
// orderly EOF before any byte of a new message.
void write_message(int fd, std::string_view body);
bool read_message(int fd, Bytes& body);

Bytes error_response(ErrorCode code, std::string_view message);

struct HostPort {
  std::string host;
  std::uint16_t port = 0;
};

// "host:port"; throws kValidation.
HostPort parse_address(std::string_view address);

// Retries refused connections until `timeout`, then throws kUnavailable.
UniqueFd connect_tcp(std::string_view address, std::chrono::milliseconds timeout);

}  // namespace edna::net
