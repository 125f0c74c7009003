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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "edna/common/bytes.hpp"
#include "edna/common/time.hpp"

namespace edna {

// The unit that flows through every job. Immutable by convention once built.
struct StreamRecord {
  Bytes payload;
  Timestamp event_time{};
  std::optional<Bytes> key;
  std::string source_id;
  std::string schema_tag = "raw";

  bool operator==(const StreamRecord&) const = default;
};

inline constexpr std::uint16_t kFrameVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = 16u * 1024 * 1024;
inline constexpr std::size_t kMaxSchemaTagBytes = 64;
inline constexpr std::size_t kMaxSourceIdBytes = 255;
// length(4) + version(2) + event_time(8) + source len(1) + tag len(1) + key flag(1)
inline constexpr std::size_t kFrameHeaderBytes = 17;

// Frame layout (all integers big-endian):
//   u32 frame length (whole frame, including this field)
//   u16 version (= 1)
//   i64 event_time, milliseconds since the Unix epoch
//   u8  source_id length, source_id bytes
//   u8  schema_tag length, schema_tag bytes
//   u8  key flag (0 absent, 1 present); if present: u32 key length, key bytes
//   payload bytes (the remainder of the frame)
Bytes serialize_record(const StreamRecord& record);
void append_frame(Bytes& out, const StreamRecord& record);

// Exact inverse of serialize_record; `frame` must hold exactly one frame.
StreamRecord deserialize_record(std::string_view frame);

struct DecodedFrame {
  StreamRecord record;
  std::size_t size = 0;
};

// Decodes the frame at the front of `buffer`, ignoring any trailing bytes.
// Throws kIncompleteFrame when the buffer ends before the frame does.
DecodedFrame decode_frame(std::string_view buffer);

// Throws kValidation when the record breaks an envelope invariant.
void validate_record(const StreamRecord& record);

std::size_t frame_size(const StreamRecord& record);

}  // namespace edna
