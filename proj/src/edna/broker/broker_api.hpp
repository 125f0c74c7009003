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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edna/core/record.hpp"
#include "edna/core/topic.hpp"

namespace edna::broker {

struct FetchedRecord {
  Offset offset = 0;
  StreamRecord record;

  bool operator==(const FetchedRecord&) const = default;
};

// Operation contract shared by the embedded broker and the wire client.
// Implementations are safe for concurrent use.
class BrokerApi {
 public:
  virtual ~BrokerApi() = default;

  // Idempotent. Throws kValidation for reserved names.
  virtual void create_topic(const TopicName& topic) = 0;

  Offset append(const TopicName& topic, const StreamRecord& record) {
    return append_batch(topic, std::span<const StreamRecord>(&record, 1));
  }

  // Appends in order and returns the offset of the first record. The batch is
  // acknowledged as a whole: on error none of it is.
  virtual Offset append_batch(const TopicName& topic, std::span<const StreamRecord> records) = 0;

  // Up to `max_records` records with offsets >= from. Empty when from equals
  // the topic's next offset; kOutOfRange past it.
  virtual std::vector<FetchedRecord> fetch(const TopicName& topic, Offset from,
                                           std::size_t max_records) = 0;

  // `next` is the next offset the group will read. Commits never move back.
  virtual void commit_offset(std::string_view group, const TopicName& topic, Offset next) = 0;

  virtual std::optional<Offset> read_committed(std::string_view group,
                                               const TopicName& topic) = 0;
};

}  // namespace edna::broker
