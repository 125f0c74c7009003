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

#include "edna/broker/broker.hpp"

#include "edna/common/error.hpp"
#include "edna/common/log.hpp"

namespace edna::broker {

namespace fs = std::filesystem;

namespace {

constexpr const char* kGroupsDir = "_groups";

void check_group(std::string_view group) {
  if (!is_valid_identifier(group)) {
    raise(ErrorCode::kValidation, "invalid consumer group '" + std::string(group) + "'");
  }
}

}  // namespace

Broker::Broker(fs::path root, BrokerOptions options)
    : root_(std::move(root)), options_(options) {}

std::shared_ptr<Broker> Broker::recover(const fs::path& root, BrokerOptions options) {
  std::shared_ptr<Broker> broker(new Broker(root, options));
  std::error_code ec;
  if (!options.read_only) {
    fs::create_directories(root, ec);
    if (ec) raise(ErrorCode::kIo, "create " + root.string() + ": " + ec.message());
  } else if (!fs::exists(root)) {
    raise(ErrorCode::kNotFound, "broker root " + root.string() + " does not exist");
  }

  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    if (!TopicName::is_valid(name)) continue;
    try {
      broker->topics_.emplace(name, TopicLog::open(entry.path(), TopicName(name), options));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCorruptLog) throw;
      log().error("quarantining topic {}: {}", name, e.what());
      broker->quarantined_.emplace(name, e.what());
    }
  }
  broker->groups_ = std::make_unique<ConsumerGroups>(root / kGroupsDir, options.read_only);

  if (!options.read_only && options.flush == FlushPolicy::kInterval) {
    broker->flusher_ = std::thread([b = broker.get()] { b->flush_loop(); });
  }
  return broker;
}

Broker::~Broker() {
  {
    std::lock_guard lock(flush_mu_);
    stopping_ = true;
  }
  flush_cv_.notify_all();
  if (flusher_.joinable()) flusher_.join();
  std::shared_lock lock(mu_);
  if (!options_.read_only) {
    for (auto& [name, topic] : topics_) topic->sync();
  }
}

void Broker::flush_loop() {
  std::unique_lock lock(flush_mu_);
  while (!stopping_) {
    flush_cv_.wait_for(lock, options_.flush_interval, [this] { return stopping_; });
    std::shared_lock topics_lock(mu_);
    for (auto& [name, topic] : topics_) topic->sync();
  }
}

TopicLog& Broker::topic_log(const TopicName& topic) const {
  std::shared_lock lock(mu_);
  auto it = topics_.find(topic.str());
  if (it != topics_.end()) return *it->second;
  auto q = quarantined_.find(topic.str());
  if (q != quarantined_.end()) {
    raise(ErrorCode::kCorruptLog, "topic " + topic.str() + " is quarantined: " + q->second);
  }
  raise(ErrorCode::kNotFound, "unknown topic " + topic.str());
}

void Broker::create_topic(const TopicName& topic) {
  if (options_.read_only) raise(ErrorCode::kState, "broker opened read-only");
  std::unique_lock lock(mu_);
  if (topics_.count(topic.str()) != 0) return;
  auto q = quarantined_.find(topic.str());
  if (q != quarantined_.end()) {
    raise(ErrorCode::kCorruptLog, "topic " + topic.str() + " is quarantined: " + q->second);
  }
  topics_.emplace(topic.str(), TopicLog::create(root_ / topic.str(), topic, options_));
}

Offset Broker::append_batch(const TopicName& topic, std::span<const StreamRecord> records) {
  return topic_log(topic).append(records);
}

std::vector<FetchedRecord> Broker::fetch(const TopicName& topic, Offset from,
                                         std::size_t max_records) {
  return topic_log(topic).fetch(from, max_records);
}

void Broker::commit_offset(std::string_view group, const TopicName& topic, Offset next) {
  check_group(group);
  Offset end = topic_log(topic).next_offset();
  if (next > end) {
    raise(ErrorCode::kOutOfRange, "commit " + std::to_string(next) + " beyond next offset " +
                                      std::to_string(end) + " of topic " + topic.str());
  }
  groups_->commit(std::string(group), topic.str(), next);
}

std::optional<Offset> Broker::read_committed(std::string_view group, const TopicName& topic) {
  check_group(group);
  topic_log(topic);
  return groups_->committed(std::string(group), topic.str());
}

Offset Broker::next_offset(const TopicName& topic) const {
  return topic_log(topic).next_offset();
}

std::vector<TopicInfo> Broker::topics() const {
  std::shared_lock lock(mu_);
  std::vector<TopicInfo> out;
  for (const auto& [name, topic] : topics_) out.push_back(topic->info());
  return out;
}

std::vector<QuarantinedTopic> Broker::quarantined() const {
  std::shared_lock lock(mu_);
  std::vector<QuarantinedTopic> out;
  for (const auto& [name, reason] : quarantined_) out.push_back({name, reason});
  return out;
}

std::vector<GroupOffset> Broker::group_offsets() const { return groups_->list(); }

std::uint64_t Broker::truncated_bytes() const {
  std::shared_lock lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [name, topic] : topics_) total += topic->truncated_bytes();
  return total;
}

}  // namespace edna::broker
