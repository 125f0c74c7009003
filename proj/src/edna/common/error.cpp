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

#include "edna/common/error.hpp"

#include <cerrno>
#include <cstring>

namespace edna {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kStaleCommit: return "stale-commit";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCorruptLog: return "corrupt-log";
    case ErrorCode::kFrameTooLarge: return "frame-too-large";
    case ErrorCode::kIncompleteFrame: return "incomplete-frame";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
    case ErrorCode::kCorruptFrame: return "corrupt-frame";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kPlugin: return "plugin";
    case ErrorCode::kState: return "state";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kUnavailable: return "unavailable";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

void raise(ErrorCode code, std::string message) {
  throw Error(code, message);
}

void raise_errno(std::string_view what) {
  int err = errno;
  throw Error(ErrorCode::kIo, std::string(what) + ": " + std::strerror(err));
}

bool is_retryable(ErrorCode code) noexcept {
  return code == ErrorCode::kIo || code == ErrorCode::kUnavailable ||
         code == ErrorCode::kProtocol;
}

}  // namespace edna
