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

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "edna/app/app_config.hpp"
#include "edna/app/fault.hpp"
#include "edna/broker/broker_api.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/runtime/job.hpp"

namespace edna::app {

// A running incarnation of one job, in-process or in a child process.
class JobRunner {
 public:
  virtual ~JobRunner() = default;
  // nullopt while the job is still running.
  virtual std::optional<runtime::JobOutcome> poll() = 0;
  virtual void request_stop() = 0;
  virtual runtime::JobOutcome wait() = 0;
  // Where the incarnation resumed from, if known.
  virtual std::optional<std::uint64_t> start_position() const { return std::nullopt; }
};

class JobLauncher {
 public:
  virtual ~JobLauncher() = default;
  // May throw (e.g. kPlugin); the supervisor treats that as a failed start.
  virtual std::unique_ptr<JobRunner> launch(const runtime::JobSpec& spec) = 0;
};

// Runs jobs as threads of this process.
class ThreadLauncher final : public JobLauncher {
 public:
  // `metrics_dir` receives <job>.metrics; empty disables metrics files.
  ThreadLauncher(std::shared_ptr<broker::BrokerApi> broker, std::shared_ptr<cache::CacheApi> cache,
                 runtime::JobOptions base, std::filesystem::path metrics_dir,
                 std::shared_ptr<FaultPlan> faults);
  std::unique_ptr<JobRunner> launch(const runtime::JobSpec& spec) override;

 private:
  std::shared_ptr<broker::BrokerApi> broker_;
  std::shared_ptr<cache::CacheApi> cache_;
  runtime::JobOptions base_;
  std::filesystem::path metrics_dir_;
  std::shared_ptr<FaultPlan> faults_;
};

// Runs each job as a child process: argv = prefix + [job_id] + suffix(job).
// Exit status 0 means the job completed (or stopped when asked); anything
// else is a failure. Stop sends SIGTERM.
class ProcessLauncher final : public JobLauncher {
 public:
  using ArgsFn = std::function<std::vector<std::string>(const runtime::JobSpec&)>;
  ProcessLauncher(std::vector<std::string> prefix, ArgsFn suffix);
  std::unique_ptr<JobRunner> launch(const runtime::JobSpec& spec) override;

 private:
  std::vector<std::string> prefix_;
  ArgsFn suffix_;
};

enum class AppState { kRunning, kCompleted, kStopped, kFailed };
const char* to_string(AppState state) noexcept;

struct SupervisorEvent {
  // Milliseconds since deploy.
  std::int64_t at_ms = 0;
  // start, completed, failed, restart, stop, app-completed, app-failed,
  // app-stopped
  std::string kind;
  std::string job;
  std::string detail;
};

struct DeployOptions {
  std::shared_ptr<JobLauncher> launcher;
  RestartPolicy policy;
  // Per-run end-of-stream bookkeeping is cleared here at deploy.
  std::shared_ptr<runtime::CheckpointStore> checkpoints;
  Millis poll_interval{10};
};

// A deployed application: one control thread supervising every job.
class Application {
 public:
  // Creates all topics, starts jobs consumers-first and begins supervising.
  // Throws kValidation when the graph has errors.
  static std::unique_ptr<Application> deploy(AppGraph graph, std::shared_ptr<broker::BrokerApi> broker,
                                             DeployOptions options);
  ~Application();

  Application(const Application&) = delete;
  Application& operator=(const Application&) = delete;

  AppState state() const;
  AppState wait();
  // False on timeout.
  bool wait_for(Millis timeout);
  // Stops jobs producers-first, each finishing its in-flight batches.
  // Idempotent; a failed or completed application keeps its state.
  void shutdown();

  std::vector<SupervisorEvent> events() const;
  // The job that exhausted its restarts, and why.
  std::string failed_job() const;
  std::string failure() const;
  std::map<std::string, runtime::JobState> job_states() const;
  std::map<std::string, std::size_t> restart_counts() const;
  const AppGraph& graph() const noexcept { return graph_; }
  const std::vector<std::string>& topo_order() const noexcept { return order_; }

 private:
  struct Slot {
    runtime::JobSpec spec;
    std::unique_ptr<JobRunner> runner;
    runtime::JobState state = runtime::JobState::kRunning;
    std::deque<std::chrono::steady_clock::time_point> recent_restarts;
    std::size_t total_restarts = 0;
    std::optional<std::chrono::steady_clock::time_point> restart_at;
  };

  Application(AppGraph graph, DeployOptions options);
  void control_loop();
  void launch_locked(Slot& slot, bool restart);
  void on_failure_locked(Slot& slot, const std::string& why);
  void stop_all_locked(std::unique_lock<std::mutex>& lock);
  void event_locked(std::string kind, std::string job, std::string detail = {});
  void finish_locked(AppState state);

  AppGraph graph_;
  DeployOptions options_;
  std::vector<std::string> order_;
  std::chrono::steady_clock::time_point started_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, Slot> slots_;
  AppState state_ = AppState::kRunning;
  bool shutdown_requested_ = false;
  // Set once the control loop has exited.
  bool finished_ = false;
  std::string failed_job_;
  std::string failure_;
  std::vector<SupervisorEvent> events_;
  std::thread control_;
};

}  // namespace edna::app
