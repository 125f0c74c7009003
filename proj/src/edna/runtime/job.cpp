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

#include "edna/runtime/job.hpp"

#include <algorithm>

#include "edna/common/log.hpp"
#include "edna/runtime/window.hpp"

namespace edna::runtime {

StreamRecord make_dead_letter(const StreamRecord& original, std::string_view reason,
                              std::string_view job_id) {
  StreamRecord r;
  r.schema_tag = std::string(kDeadLetterTag);
  r.source_id = std::string(job_id);
  r.key = std::string(reason);
  r.event_time = original.event_time;
  r.payload = serialize_record(original);
  return r;
}

DeadLetter decode_dead_letter(const StreamRecord& record) {
  if (record.schema_tag != kDeadLetterTag || !record.key) {
    raise(ErrorCode::kCorruptFrame, "not a dead-letter record");
  }
  return DeadLetter{*record.key, deserialize_record(record.payload)};
}

std::string dead_letter_topic(std::string_view job_id) { return std::string(job_id) + ".dlq"; }

const char* to_string(JobState state) noexcept {
  switch (state) {
    case JobState::kRunning: return "running";
    case JobState::kCompleted: return "completed";
    case JobState::kStopped: return "stopped";
    case JobState::kFailed: return "failed";
  }
  return "?";
}

namespace {

struct Dead {
  TrackedRecord item;
  std::string reason;
};

struct StageOutput {
  std::vector<TrackedRecord> items;
  std::vector<Dead> dead;
  std::uint64_t dropped = 0;
};

}  // namespace

class Job::Stage {
 public:
  explicit Stage(std::string name) : name_(std::move(name)) {}
  virtual ~Stage() = default;
  virtual void process(std::vector<TrackedRecord>& in, StageOutput& out) = 0;
  virtual void flush(StageOutput& /*out*/) {}
  virtual std::optional<std::uint64_t> min_held() const { return std::nullopt; }
  virtual std::uint64_t held() const { return 0; }

 protected:
  void fail(TrackedRecord& item, const std::exception& e, StageOutput& out) {
    log().warn("{}: record at position {} dead-lettered: {}", name_, item.position, e.what());
    out.dead.push_back(Dead{std::move(item), "error"});
  }

  std::string name_;
};

namespace {

class MapStage final : public Job::Stage {
 public:
  MapStage(std::string name, std::unique_ptr<MapPlugin> p) : Stage(std::move(name)), p_(std::move(p)) {}
  void process(std::vector<TrackedRecord>& in, StageOutput& out) override {
    for (auto& item : in) {
      try {
        item.record = p_->apply(item.record);
      } catch (const std::exception& e) {
        fail(item, e, out);
        continue;
      }
      out.items.push_back(std::move(item));
    }
  }

 private:
  std::unique_ptr<MapPlugin> p_;
};

class FilterStage final : public Job::Stage {
 public:
  FilterStage(std::string name, std::unique_ptr<FilterPlugin> p)
      : Stage(std::move(name)), p_(std::move(p)) {}
  void process(std::vector<TrackedRecord>& in, StageOutput& out) override {
    for (auto& item : in) {
      bool keep = false;
      try {
        keep = p_->keep(item.record);
      } catch (const std::exception& e) {
        fail(item, e, out);
        continue;
      }
      if (keep) out.items.push_back(std::move(item));
      else out.dropped += item.weight;
    }
  }

 private:
  std::unique_ptr<FilterPlugin> p_;
};

// The input's weight rides on its first output; an input that yields nothing
// counts as dropped.
class FlatMapStage final : public Job::Stage {
 public:
  FlatMapStage(std::string name, std::unique_ptr<FlatMapPlugin> p)
      : Stage(std::move(name)), p_(std::move(p)) {}
  void process(std::vector<TrackedRecord>& in, StageOutput& out) override {
    std::vector<StreamRecord> produced;
    for (auto& item : in) {
      produced.clear();
      try {
        p_->apply(item.record, produced);
      } catch (const std::exception& e) {
        fail(item, e, out);
        continue;
      }
      if (produced.empty()) {
        out.dropped += item.weight;
        continue;
      }
      bool first = true;
      for (auto& r : produced) {
        out.items.push_back(TrackedRecord{std::move(r), item.position, first ? item.weight : 0});
        first = false;
      }
    }
  }
  void flush(StageOutput& out) override {
    std::vector<StreamRecord> produced;
    p_->flush(produced);
    for (auto& r : produced) out.items.push_back(TrackedRecord{std::move(r), 0, 0});
  }

 private:
  std::unique_ptr<FlatMapPlugin> p_;
};

class WindowStage final : public Job::Stage {
 public:
  WindowStage(std::string name, WindowSpec spec, std::string source)
      : Stage(std::move(name)), op_(spec, std::move(source)) {}
  void process(std::vector<TrackedRecord>& in, StageOutput& out) override {
    WindowOperator::Output o;
    for (auto& item : in) op_.add(std::move(item), o);
    take(o, out);
  }
  void flush(StageOutput& out) override {
    WindowOperator::Output o;
    op_.flush(o);
    take(o, out);
  }
  std::optional<std::uint64_t> min_held() const override { return op_.min_held_position(); }
  std::uint64_t held() const override { return op_.held(); }

 private:
  static void take(WindowOperator::Output& o, StageOutput& out) {
    for (auto& b : o.batches) out.items.push_back(std::move(b));
    for (auto& l : o.late) out.dead.push_back(Dead{std::move(l), "late"});
    out.dropped += o.deduped_weight;
  }

  WindowOperator op_;
};

std::uint64_t total_weight(const std::vector<TrackedRecord>& items) {
  std::uint64_t w = 0;
  for (const auto& i : items) w += i.weight;
  return w;
}

}  // namespace

Job::Job(JobSpec spec, std::shared_ptr<broker::BrokerApi> broker,
         std::shared_ptr<cache::CacheApi> cache, JobOptions options)
    : spec_(std::move(spec)),
      broker_(std::move(broker)),
      cache_(std::move(cache)),
      options_(std::move(options)) {}

std::unique_ptr<Job> Job::start(JobSpec spec, std::shared_ptr<broker::BrokerApi> broker,
                                std::shared_ptr<cache::CacheApi> cache, JobOptions options) {
  validate_job_spec(spec);
  if (!options.registry) raise(ErrorCode::kState, "job " + spec.job_id + ": no plugin registry");
  std::unique_ptr<Job> job(new Job(std::move(spec), std::move(broker), std::move(cache),
                                   std::move(options)));
  Job& j = *job;
  const PluginRegistry& reg = *j.options_.registry;

  auto context = [&j](const PluginConfig& config) {
    PluginContext c;
    c.job_id = j.spec_.job_id;
    c.consumer_group = j.spec_.consumer_group;
    c.config = &config;
    c.broker = j.broker_;
    c.cache = j.cache_;
    c.checkpoints = j.options_.checkpoints;
    c.base_dir = j.options_.base_dir;
    c.count = [&j](std::string_view name, std::uint64_t delta) { j.metrics_.add_extra(name, delta); };
    c.stopping = [&j] { return j.stopping(); };
    return c;
  };

  if (j.broker_) j.broker_->create_topic(TopicName(dead_letter_topic(j.spec_.job_id)));

  j.ingest_ = reg.make_ingest(j.spec_.ingest.plugin, context(j.spec_.ingest.config));
  for (std::size_t i = 0; i < j.spec_.process_chain.size(); ++i) {
    const ProcessSpec& p = j.spec_.process_chain[i];
    std::string name = j.spec_.job_id + "/process[" + std::to_string(i) + "]:" + p.plugin;
    switch (p.kind) {
      case ProcessKind::kMap:
        j.stages_.push_back(std::make_unique<MapStage>(name, reg.make_map(p.plugin, context(p.config))));
        break;
      case ProcessKind::kFilter:
        j.stages_.push_back(
            std::make_unique<FilterStage>(name, reg.make_filter(p.plugin, context(p.config))));
        break;
      case ProcessKind::kFlatMap:
        j.stages_.push_back(
            std::make_unique<FlatMapStage>(name, reg.make_flatmap(p.plugin, context(p.config))));
        break;
      case ProcessKind::kWindow:
        j.stages_.push_back(std::make_unique<WindowStage>(name, window_spec_from(p), j.spec_.job_id));
        break;
    }
  }
  j.emit_ = reg.make_emit(j.spec_.emit.plugin, context(j.spec_.emit.config));
  j.start_position_ = j.ingest_->start_position();
  log().info("job {}: starting at position {}", j.spec_.job_id, j.start_position_);

  j.write_metrics(true);
  j.worker_thread_ = std::thread([&j] { j.worker_loop(); });
  j.ingest_thread_ = std::thread([&j] { j.ingest_loop(); });
  return job;
}

Job::~Job() {
  request_stop();
  if (ingest_thread_.joinable()) ingest_thread_.join();
  if (worker_thread_.joinable()) worker_thread_.join();
}

void Job::request_stop() {
  stop_.store(true);
  std::lock_guard lock(mu_);
  space_cv_.notify_all();
  queue_cv_.notify_all();
}

JobOutcome Job::wait() {
  std::unique_lock lock(outcome_mu_);
  outcome_cv_.wait(lock, [this] { return outcome_.has_value(); });
  JobOutcome o = *outcome_;
  lock.unlock();
  if (ingest_thread_.joinable()) ingest_thread_.join();
  if (worker_thread_.joinable()) worker_thread_.join();
  return o;
}

std::optional<JobOutcome> Job::outcome() const {
  std::lock_guard lock(outcome_mu_);
  return outcome_;
}

void Job::finish(JobOutcome outcome) {
  stop_.store(true);
  {
    std::lock_guard lock(mu_);
    space_cv_.notify_all();
  }
  try {
    write_metrics(true);
  } catch (const std::exception& e) {
    log().warn("job {}: cannot write metrics: {}", spec_.job_id, e.what());
  }
  std::lock_guard lock(outcome_mu_);
  outcome_ = std::move(outcome);
  outcome_cv_.notify_all();
}

void Job::write_metrics(bool force) {
  if (options_.metrics_path.empty()) return;
  auto now = std::chrono::steady_clock::now();
  if (!force && now - last_metrics_write_ < options_.metrics_interval) return;
  last_metrics_write_ = now;
  write_metrics_file(options_.metrics_path, metrics_.snapshot());
}

void Job::ingest_loop() {
  const std::size_t cap = spec_.buffer_capacity;
  std::uint64_t last_cursor = start_position_;
  std::optional<Error> failure;
  bool eos = false;
  try {
    while (!stopping()) {
      std::size_t room = 0;
      {
        std::unique_lock lock(mu_);
        if (in_flight_ >= cap) {
          metrics_.ingest_pauses.fetch_add(1);
          space_cv_.wait(lock, [&] { return in_flight_ < cap || stopping(); });
          if (stopping()) break;
        }
        room = cap - in_flight_;
      }
      PollResult r;
      try {
        retry_call(options_.retry, spec_.job_id + " ingest", [&] { r = ingest_->poll(std::min(room, spec_.batch_size)); },
                   [this] { return stopping(); });
      } catch (const Error&) {
        if (stopping()) break;
        throw;
      }
      if (r.records.empty() && !r.end_of_stream && r.cursor == last_cursor) {
        interruptible_sleep(options_.idle_wait, [this] { return stopping(); });
        continue;
      }
      last_cursor = r.cursor;
      eos = r.end_of_stream;
      {
        std::lock_guard lock(mu_);
        in_flight_ += r.records.size();
        metrics_.note_in_flight(in_flight_);
        queue_.push_back(Chunk{std::move(r.records), r.cursor, r.end_of_stream, std::nullopt, false});
        queue_cv_.notify_one();
      }
      if (eos) break;
    }
  } catch (const Error& e) {
    failure = e;
  } catch (const std::exception& e) {
    failure = Error(ErrorCode::kInternal, e.what());
  }
  std::lock_guard lock(mu_);
  if (failure) queue_.push_back(Chunk{{}, 0, false, failure, true});
  if (!eos && !failure) queue_.push_back(Chunk{{}, 0, false, std::nullopt, true});
  queue_cv_.notify_one();
}

void Job::worker_loop() {
  JobOutcome result;
  try {
    while (true) {
      Chunk c;
      {
        std::unique_lock lock(mu_);
        queue_cv_.wait(lock, [&] { return !queue_.empty(); });
        c = std::move(queue_.front());
        queue_.pop_front();
      }
      if (c.failure) {
        result = JobOutcome{JobState::kFailed, c.failure->code(), c.failure->what(), false};
        break;
      }
      if (c.terminal) {
        result.state = JobState::kStopped;
        break;
      }
      process_chunk(c);
      if (c.end_of_stream) {
        retry_call(options_.retry, spec_.job_id + " finish", [&] { emit_->finish(); },
                   [this] { return false; });
        result.state = JobState::kCompleted;
        break;
      }
    }
  } catch (const InjectedCrash&) {
    result = JobOutcome{JobState::kFailed, ErrorCode::kInternal, "injected crash", true};
  } catch (const Error& e) {
    result = JobOutcome{JobState::kFailed, e.code(), e.what(), false};
  } catch (const std::exception& e) {
    result = JobOutcome{JobState::kFailed, ErrorCode::kInternal, e.what(), false};
  }
  if (result.state == JobState::kFailed) {
    log().error("job {} failed: {}", spec_.job_id, result.error);
  }
  finish(std::move(result));
}

void Job::process_chunk(Chunk& chunk) {
  const std::size_t n = chunk.records.size();
  metrics_.records_in.fetch_add(n);

  std::vector<TrackedRecord> items;
  items.reserve(n);
  for (auto& s : chunk.records) items.push_back(TrackedRecord{std::move(s.record), s.position, 1});

  std::vector<Dead> dead;
  std::uint64_t dropped = 0;
  for (auto& stage : stages_) {
    StageOutput out;
    stage->process(items, out);
    if (chunk.end_of_stream) stage->flush(out);
    items = std::move(out.items);
    dropped += out.dropped;
    for (auto& d : out.dead) dead.push_back(std::move(d));
  }

  auto no_stop = [] { return false; };
  if (!items.empty()) {
    std::vector<StreamRecord> batch;
    batch.reserve(items.size());
    for (const auto& i : items) batch.push_back(i.record);
    retry_call(options_.retry, spec_.job_id + " emit", [&] { emit_->push(batch); }, no_stop);
    metrics_.records_out.fetch_add(total_weight(items));
    metrics_.emitted.fetch_add(items.size());
  }
  if (!dead.empty()) {
    std::vector<StreamRecord> letters;
    std::uint64_t w = 0;
    for (const auto& d : dead) {
      letters.push_back(make_dead_letter(d.item.record, d.reason, spec_.job_id));
      w += d.item.weight;
    }
    TopicName topic(dead_letter_topic(spec_.job_id));
    retry_call(options_.retry, spec_.job_id + " dead-letter",
               [&] { broker_->append_batch(topic, letters); }, no_stop);
    metrics_.dead_lettered.fetch_add(w);
  }
  metrics_.dropped.fetch_add(dropped);

  std::uint64_t held = 0;
  std::uint64_t commit_to = chunk.cursor;
  for (const auto& stage : stages_) {
    held += stage->held();
    if (auto p = stage->min_held()) commit_to = std::min(commit_to, *p);
  }
  metrics_.held.store(held);
  {
    std::lock_guard lock(mu_);
    in_flight_ -= n;
    metrics_.note_in_flight(in_flight_);
    space_cv_.notify_all();
  }
  metrics_.batches.fetch_add(1);

  if (options_.before_commit) options_.before_commit(spec_.job_id, metrics_.snapshot());

  if (!last_commit_ || commit_to > *last_commit_) {
    retry_call(options_.retry, spec_.job_id + " commit", [&] { ingest_->commit(commit_to); }, no_stop);
    last_commit_ = commit_to;
    metrics_.last_committed.store(commit_to);
    metrics_.has_commit.store(true);
  }
  write_metrics(false);
}

}  // namespace edna::runtime
