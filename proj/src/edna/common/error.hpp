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
#include <stdexcept>
#include <string>
#include <string_view>

namespace edna {

// Numeric values are shared by the wire protocol status byte and the C API
// status codes; never renumber.
enum class ErrorCode : std::uint8_t {
  kOk = 0,
  kValidation = 1,
  kNotFound = 2,
  kOutOfRange = 3,
  kStaleCommit = 4,
  kIo = 5,
  kCorruptLog = 6,
  kFrameTooLarge = 7,
  kIncompleteFrame = 8,
  kUnsupportedVersion = 9,
  kCorruptFrame = 10,
  kParse = 11,
  kPlugin = 12,
  kState = 13,
  kProtocol = 14,
  kUnavailable = 15,
  kInternal = 16,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, std::string message);

// Throws kIo carrying strerror(errno).
[[noreturn]] void raise_errno(std::string_view what);

// Transient failures that retry loops may absorb.
bool is_retryable(ErrorCode code) noexcept;

}  // namespace edna
