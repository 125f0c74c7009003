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

#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <vector>

#include "edna/broker/broker_api.hpp"
#include "edna/broker/options.hpp"
#include "edna/common/file_util.hpp"

namespace edna::broker {

struct TopicInfo {
  std::string name;
  Offset next_offset = 0;
  std::size_t segments = 0;
  std::uint64_t bytes = 0;
};

// One topic: a directory of `<base_offset>.seg` files, each a concatenation
// of stream-core frames. Offsets are dense across segments and only the last
// segment is ever written.
class TopicLog {
 public:
  // Opens an existing topic directory, truncating a torn trailing frame in
  // the tail segment. Throws kCorruptLog for any other damage.
  static std::unique_ptr<TopicLog> open(const std::filesystem::path& dir, TopicName name,
                                        const BrokerOptions& options);

  // Creates the directory and an empty first segment.
  static std::unique_ptr<TopicLog> create(const std::filesystem::path& dir, TopicName name,
                                          const BrokerOptions& options);

  TopicLog(const TopicLog&) = delete;
  TopicLog& operator=(const TopicLog&) = delete;

  Offset append(std::span<const StreamRecord> records);
  std::vector<FetchedRecord> fetch(Offset from, std::size_t max_records) const;
  Offset next_offset() const;
  TopicInfo info() const;

  // Bytes dropped from the tail segment during open.
  std::uint64_t truncated_bytes() const noexcept { return truncated_bytes_; }

  void sync();

 private:
  struct Segment {
    Offset base = 0;
    std::filesystem::path path;
    UniqueFd fd;
    std::vector<std::uint64_t> positions;
    std::uint64_t bytes = 0;
  };

  TopicLog(std::filesystem::path dir, TopicName name, BrokerOptions options);

  void load_segment(Segment& segment, bool is_tail);
  void roll_segment();
  void write_chunk(Segment& tail, std::span<const StreamRecord> records);

  std::filesystem::path dir_;
  TopicName name_;
  BrokerOptions options_;
  std::uint64_t truncated_bytes_ = 0;

  std::mutex append_mu_;
  mutable std::shared_mutex mu_;  // guards segments_ and next_
  std::deque<Segment> segments_;
  Offset next_ = 0;
};

std::string segment_file_name(Offset base);

}  // namespace edna::broker
