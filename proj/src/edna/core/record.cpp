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

#include "edna/core/record.hpp"

#include "edna/common/error.hpp"

namespace edna {

namespace {

bool is_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) > 0x7f) return false;
  }
  return true;
}

}  // namespace

void validate_record(const StreamRecord& record) {
  if (record.schema_tag.empty() || record.schema_tag.size() > kMaxSchemaTagBytes ||
      !is_ascii(record.schema_tag)) {
    raise(ErrorCode::kValidation, "schema_tag must be 1..64 ASCII bytes");
  }
  if (record.source_id.size() > kMaxSourceIdBytes) {
    raise(ErrorCode::kValidation, "source_id longer than 255 bytes");
  }
}

std::size_t frame_size(const StreamRecord& record) {
  std::size_t size = kFrameHeaderBytes + record.source_id.size() + record.schema_tag.size() +
                     record.payload.size();
  if (record.key) size += 4 + record.key->size();
  return size;
}

void append_frame(Bytes& out, const StreamRecord& record) {
  validate_record(record);
  std::size_t size = frame_size(record);
  if (size > kMaxFrameBytes) {
    raise(ErrorCode::kFrameTooLarge,
          "frame of " + std::to_string(size) + " bytes exceeds the 16 MiB cap");
  }
  out.reserve(out.size() + size);
  put_u32(out, static_cast<std::uint32_t>(size));
  put_u16(out, kFrameVersion);
  put_u64(out, static_cast<std::uint64_t>(to_millis(record.event_time)));
  put_u8(out, static_cast<std::uint8_t>(record.source_id.size()));
  out += record.source_id;
  put_u8(out, static_cast<std::uint8_t>(record.schema_tag.size()));
  out += record.schema_tag;
  if (record.key) {
    put_u8(out, 1);
    put_u32(out, static_cast<std::uint32_t>(record.key->size()));
    out += *record.key;
  } else {
    put_u8(out, 0);
  }
  out += record.payload;
}

Bytes serialize_record(const StreamRecord& record) {
  Bytes out;
  append_frame(out, record);
  return out;
}

DecodedFrame decode_frame(std::string_view buffer) {
  if (buffer.size() < 4) raise(ErrorCode::kIncompleteFrame, "frame shorter than length prefix");
  std::uint32_t size = get_u32(buffer, 0);
  if (size < kFrameHeaderBytes + 1 || size > kMaxFrameBytes) {
    raise(ErrorCode::kCorruptFrame, "frame length " + std::to_string(size) + " out of bounds");
  }
  if (buffer.size() >= 6) {
    std::uint16_t version = get_u16(buffer, 4);
    if (version != kFrameVersion) {
      raise(ErrorCode::kUnsupportedVersion,
            "unsupported frame version " + std::to_string(version));
    }
  }
  if (buffer.size() < size) {
    raise(ErrorCode::kIncompleteFrame, "frame declares " + std::to_string(size) +
                                           " bytes but only " + std::to_string(buffer.size()) +
                                           " are available");
  }
  std::string_view frame = buffer.substr(0, size);
  std::size_t pos = 6;
  auto need = [&](std::size_t n) {
    if (pos + n > frame.size()) raise(ErrorCode::kCorruptFrame, "field overruns frame length");
  };

  DecodedFrame out;
  StreamRecord& r = out.record;
  r.event_time = from_millis(static_cast<std::int64_t>(get_u64(frame, pos)));
  pos += 8;

  std::size_t len = get_u8(frame, pos++);
  need(len);
  r.source_id.assign(frame.substr(pos, len));
  pos += len;

  need(1);
  len = get_u8(frame, pos++);
  need(len);
  r.schema_tag.assign(frame.substr(pos, len));
  pos += len;
  if (r.schema_tag.empty() || r.schema_tag.size() > kMaxSchemaTagBytes ||
      !is_ascii(r.schema_tag)) {
    raise(ErrorCode::kCorruptFrame, "invalid schema_tag in frame");
  }

  need(1);
  std::uint8_t flag = get_u8(frame, pos++);
  if (flag == 1) {
    need(4);
    std::size_t key_len = get_u32(frame, pos);
    pos += 4;
    need(key_len);
    r.key = Bytes(frame.substr(pos, key_len));
    pos += key_len;
  } else if (flag != 0) {
    raise(ErrorCode::kCorruptFrame, "invalid key presence flag");
  }

  r.payload.assign(frame.substr(pos));
  out.size = size;
  return out;
}

StreamRecord deserialize_record(std::string_view frame) {
  DecodedFrame decoded = decode_frame(frame);
  if (decoded.size != frame.size()) {
    raise(ErrorCode::kCorruptFrame, "length prefix " + std::to_string(decoded.size) +
                                        " disagrees with frame of " +
                                        std::to_string(frame.size()) + " bytes");
  }
  return std::move(decoded.record);
}

}  // namespace edna
