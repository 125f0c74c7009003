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
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "edna/runtime/job.hpp"
#include "edna/runtime/registry.hpp"

namespace edna::testing {

// In-memory finite source: position = index, commit recorded.
struct VectorSourceState {
  std::vector<StreamRecord> records;
  std::atomic<std::uint64_t> committed{0};
  std::atomic<std::uint64_t> polls{0};
};

class VectorSource final : public runtime::IngestPlugin {
 public:
  explicit VectorSource(std::shared_ptr<VectorSourceState> s)
      : s_(std::move(s)), next_(s_->committed.load()) {}
  runtime::PollResult poll(std::size_t max) override {
    s_->polls.fetch_add(1);
    runtime::PollResult r;
    while (r.records.size() < max && next_ < s_->records.size()) {
      r.records.push_back(runtime::SourceRecord{s_->records[next_], next_});
      ++next_;
    }
    r.cursor = next_;
    r.end_of_stream = next_ == s_->records.size();
    return r;
  }
  void commit(std::uint64_t next) override { s_->committed.store(next); }
  std::uint64_t start_position() const override { return s_->committed.load(); }

 private:
  std::shared_ptr<VectorSourceState> s_;
  std::uint64_t next_;
};

// Collects pushed records; optional per-record delay and scripted failures.
struct CollectSinkState {
  std::mutex mu;
  std::vector<StreamRecord> records;
  std::atomic<int> finish_calls{0};
  std::chrono::milliseconds per_record_delay{0};
  std::atomic<int> transient_failures{0};
  std::vector<StreamRecord> snapshot() {
    std::lock_guard lock(mu);
    return records;
  }
};

class CollectSink final : public runtime::EmitPlugin {
 public:
  explicit CollectSink(std::shared_ptr<CollectSinkState> s) : s_(std::move(s)) {}
  void push(std::span<const StreamRecord> records) override {
    if (s_->transient_failures.load() > 0) {
      s_->transient_failures.fetch_sub(1);
      raise(ErrorCode::kUnavailable, "sink briefly down");
    }
    for (const auto& r : records) {
      if (s_->per_record_delay.count() > 0) std::this_thread::sleep_for(s_->per_record_delay);
      std::lock_guard lock(s_->mu);
      s_->records.push_back(r);
    }
  }
  void finish() override { s_->finish_calls.fetch_add(1); }

 private:
  std::shared_ptr<CollectSinkState> s_;
};

inline StreamRecord text_record(std::string payload, std::int64_t t_ms = 0,
                                std::optional<std::string> key = std::nullopt) {
  StreamRecord r;
  r.payload = std::move(payload);
  r.event_time = from_millis(t_ms);
  r.key = std::move(key);
  r.source_id = "test";
  return r;
}

class LambdaMap final : public runtime::MapPlugin {
 public:
  explicit LambdaMap(std::function<StreamRecord(const StreamRecord&)> f) : f_(std::move(f)) {}
  StreamRecord apply(const StreamRecord& r) override { return f_(r); }

 private:
  std::function<StreamRecord(const StreamRecord&)> f_;
};

class LambdaFilter final : public runtime::FilterPlugin {
 public:
  explicit LambdaFilter(std::function<bool(const StreamRecord&)> f) : f_(std::move(f)) {}
  bool keep(const StreamRecord& r) override { return f_(r); }

 private:
  std::function<bool(const StreamRecord&)> f_;
};

}  // namespace edna::testing
