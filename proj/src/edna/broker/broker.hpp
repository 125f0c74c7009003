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

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <thread>

#include "edna/broker/broker_api.hpp"
#include "edna/broker/consumer_groups.hpp"
#include "edna/broker/options.hpp"
#include "edna/broker/topic_log.hpp"

namespace edna::broker {

struct QuarantinedTopic {
  std::string name;
  std::string reason;
};

// Embedded, durable topic broker rooted at a directory:
//   <root>/<topic>/<base_offset>.seg
//   <root>/_groups/<group>.offsets
class Broker final : public BrokerApi {
 public:
  // Reconstructs every topic and committed offset under `root` (created if
  // missing). Torn trailing frames are truncated; topics with any other
  // damage are quarantined and reject all operations with kCorruptLog.
  static std::shared_ptr<Broker> recover(const std::filesystem::path& root,
                                         BrokerOptions options = {});

  ~Broker() override;

  void create_topic(const TopicName& topic) override;
  Offset append_batch(const TopicName& topic, std::span<const StreamRecord> records) override;
  std::vector<FetchedRecord> fetch(const TopicName& topic, Offset from,
                                   std::size_t max_records) override;
  void commit_offset(std::string_view group, const TopicName& topic, Offset next) override;
  std::optional<Offset> read_committed(std::string_view group, const TopicName& topic) override;

  Offset next_offset(const TopicName& topic) const;
  std::vector<TopicInfo> topics() const;
  std::vector<QuarantinedTopic> quarantined() const;
  std::vector<GroupOffset> group_offsets() const;
  std::uint64_t truncated_bytes() const;

  const std::filesystem::path& root() const noexcept { return root_; }
  const BrokerOptions& options() const noexcept { return options_; }

 private:
  Broker(std::filesystem::path root, BrokerOptions options);

  TopicLog& topic_log(const TopicName& topic) const;
  void flush_loop();

  std::filesystem::path root_;
  BrokerOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<TopicLog>> topics_;
  std::map<std::string, std::string> quarantined_;
  std::unique_ptr<ConsumerGroups> groups_;

  std::mutex flush_mu_;
  std::condition_variable flush_cv_;
  bool stopping_ = false;
  std::thread flusher_;
};

}  // namespace edna::broker
