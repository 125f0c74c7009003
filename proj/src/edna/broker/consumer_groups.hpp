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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edna/core/topic.hpp"

namespace edna::broker {

struct GroupOffset {
  std::string group;
  std::string topic;
  Offset next = 0;
};

// Durable committed positions, one text file per group:
// `<dir>/<group>.offsets` holding `topic<TAB>offset` lines.
class ConsumerGroups {
 public:
  ConsumerGroups(std::filesystem::path dir, bool read_only);

  // Throws kStaleCommit when `next` is below the stored position.
  void commit(const std::string& group, const std::string& topic, Offset next);
  std::optional<Offset> committed(const std::string& group, const std::string& topic) const;
  std::vector<GroupOffset> list() const;

 private:
  void persist(const std::string& group);

  std::filesystem::path dir_;
  bool read_only_;
  mutable std::mutex mu_;
  std::map<std::string, std::map<std::string, Offset>> groups_;
};

}  // namespace edna::broker
