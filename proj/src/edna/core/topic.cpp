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

#include "edna/core/topic.hpp"

#include "edna/common/error.hpp"

namespace edna {

bool TopicName::is_valid(std::string_view name) noexcept {
  if (name.empty() || name.size() > 128) return false;
  if (name == "." || name == ".." || name.front() == '_') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
              c == '-';
    if (!ok) return false;
  }
  return true;
}

TopicName::TopicName(std::string name) : name_(std::move(name)) {
  if (!is_valid(name_)) raise(ErrorCode::kValidation, "invalid topic name '" + name_ + "'");
}

bool is_valid_identifier(std::string_view id) noexcept {
  if (id.empty() || id.size() > 128 || id.front() == '.' || id.front() == '_') return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace edna
