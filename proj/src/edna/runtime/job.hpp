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
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edna/common/error.hpp"
#include "edna/runtime/checkpoint.hpp"
#include "edna/runtime/job_spec.hpp"
#include "edna/runtime/metrics.hpp"
#include "edna/runtime/plugin.hpp"
#include "edna/runtime/registry.hpp"
#include "edna/runtime/retry.hpp"

namespace edna::runtime {

// Thrown by fault hooks to simulate a process crash. Deliberately not a
// std::exception so ordinary error handling never swallows it.
struct InjectedCrash {
  std::string job_id;
};

// Schema tag of dead-letter records; the key holds the reason ("error" or
// "late") and the payload the original record's frame.
inline constexpr std::string_view kDeadLetterTag = "edna.dlq";

StreamRecord make_dead_letter(const StreamRecord& original, std::string_view reason,
                              std::string_view job_id);
struct DeadLetter {
  std::string reason;
  StreamRecord original;
};
DeadLetter decode_dead_letter(const StreamRecord& record);

std::string dead_letter_topic(std::string_view job_id);

struct JobOptions {
  std::shared_ptr<const PluginRegistry> registry;
  std::shared_ptr<CheckpointStore> checkpoints;
  std::filesystem::path base_dir;
  // Empty disables the metrics file.
  std::filesystem::path metrics_path;
  Millis metrics_interval{500};
  RetryPolicy retry;
  // Pause after an empty poll.
  Millis idle_wait{20};
  // Runs after a batch has been emitted and before its offsets commit.
  std::function<void(const std::string& job_id, const MetricsSnapshot& metrics)> before_commit;
};

enum class JobState { kRunning, kCompleted, kStopped, kFailed };
const char* to_string(JobState state) noexcept;

struct JobOutcome {
  JobState state = JobState::kRunning;
  ErrorCode code = ErrorCode::kOk;
  std::string error;
  bool injected = false;
};

class Job {
 public:
  // Builds every plugin, then starts the loop. Throws kPlugin naming the
  // plugin that could not start, kValidation for a bad spec.
  static std::unique_ptr<Job> start(JobSpec spec, std::shared_ptr<broker::BrokerApi> broker,
                                    std::shared_ptr<cache::CacheApi> cache, JobOptions options);
  ~Job();

  Job(const Job&) = delete;
  Job& operator=(const Job&) = delete;

  // Stops polling; batches already taken in are finished and committed.
  void request_stop();
  JobOutcome wait();
  // Non-blocking; nullopt while running.
  std::optional<JobOutcome> outcome() const;

  MetricsSnapshot metrics() const { return metrics_.snapshot(); }
  const JobSpec& spec() const noexcept { return spec_; }
  std::uint64_t start_position() const noexcept { return start_position_; }

  class Stage;

 private:
  struct Chunk {
    std::vector<SourceRecord> records;
    std::uint64_t cursor = 0;
    bool end_of_stream = false;
    // Set when the ingest thread died.
    std::optional<Error> failure;
    // Last chunk after a stop request.
    bool terminal = false;
  };

  Job(JobSpec spec, std::shared_ptr<broker::BrokerApi> broker,
      std::shared_ptr<cache::CacheApi> cache, JobOptions options);

  void ingest_loop();
  void worker_loop();
  void process_chunk(Chunk& chunk);
  void finish(JobOutcome outcome);
  void write_metrics(bool force);
  bool stopping() const { return stop_.load(); }

  JobSpec spec_;
  std::shared_ptr<broker::BrokerApi> broker_;
  std::shared_ptr<cache::CacheApi> cache_;
  JobOptions options_;
  PluginContext ctx_;
  std::unique_ptr<IngestPlugin> ingest_;
  std::vector<std::unique_ptr<Stage>> stages_;
  std::unique_ptr<EmitPlugin> emit_;
  std::uint64_t start_position_ = 0;

  JobMetrics metrics_;
  std::optional<std::uint64_t> last_commit_;
  std::chrono::steady_clock::time_point last_metrics_write_{};

  std::atomic<bool> stop_{false};
  std::atomic<bool> worker_done_{false};
  std::mutex mu_;
  std::condition_variable queue_cv_;
  std::condition_variable space_cv_;
  std::deque<Chunk> queue_;
  std::uint64_t in_flight_ = 0;

  mutable std::mutex outcome_mu_;
  std::condition_variable outcome_cv_;
  std::optional<JobOutcome> outcome_;

  std::thread ingest_thread_;
  std::thread worker_thread_;
};

}  // namespace edna::runtime
