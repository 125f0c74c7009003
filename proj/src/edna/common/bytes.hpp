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

namespace edna {

// Binary-safe byte sequence; std::string carries arbitrary octets.
using Bytes = std::string;

inline void put_u8(Bytes& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>(v >> shift));
}

inline void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>(v >> shift));
}

inline std::uint8_t get_u8(std::string_view in, std::size_t pos) {
  return static_cast<std::uint8_t>(in[pos]);
}

inline std::uint16_t get_u16(std::string_view in, std::size_t pos) {
  return static_cast<std::uint16_t>((get_u8(in, pos) << 8) | get_u8(in, pos + 1));
}

inline std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | get_u8(in, pos + i);
  return v;
}

inline std::uint64_t get_u64(std::string_view in, std::size_t pos) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | get_u8(in, pos + i);
  return v;
}

}  // namespace edna
