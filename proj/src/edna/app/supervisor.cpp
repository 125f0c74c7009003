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

#include "edna/app/supervisor.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>

#include "edna/app/validate.hpp"
#include "edna/common/error.hpp"
#include "edna/common/log.hpp"
#include "edna/core/topic.hpp"

namespace edna::app {

using runtime::JobOutcome;
using runtime::JobState;

const char* to_string(AppState s) noexcept {
  switch (s) {
    case AppState::kRunning: return "running";
    case AppState::kCompleted: return "completed";
    case AppState::kStopped: return "stopped";
    case AppState::kFailed: return "failed";
  }
  return "?";
}

// ---- thread launcher ---------------------------------------------------------

namespace {

class ThreadRunner final : public JobRunner {
 public:
  explicit ThreadRunner(std::unique_ptr<runtime::Job> job) : job_(std::move(job)) {}
  std::optional<JobOutcome> poll() override { return job_->outcome(); }
  void request_stop() override { job_->request_stop(); }
  JobOutcome wait() override { return job_->wait(); }
  std::optional<std::uint64_t> start_position() const override { return job_->start_position(); }

 private:
  std::unique_ptr<runtime::Job> job_;
};

class ProcessRunner final : public JobRunner {
 public:
  explicit ProcessRunner(pid_t pid) : pid_(pid) {}
  ~ProcessRunner() override {
    if (!done_) {
      ::kill(pid_, SIGKILL);
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  std::optional<JobOutcome> poll() override {
    if (done_) return outcome_;
    int status = 0;
    pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == 0) return std::nullopt;
    if (r < 0) {
      record(JobOutcome{JobState::kFailed, ErrorCode::kIo, "waitpid failed", false});
    } else {
      record(from_status(status));
    }
    return outcome_;
  }

  void request_stop() override {
    if (!done_) {
      stop_requested_ = true;
      ::kill(pid_, SIGTERM);
    }
  }

  JobOutcome wait() override {
    if (done_) return outcome_;
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0) {
      if (errno != EINTR) {
        record(JobOutcome{JobState::kFailed, ErrorCode::kIo, "waitpid failed", false});
        return outcome_;
      }
    }
    record(from_status(status));
    return outcome_;
  }

 private:
  JobOutcome from_status(int status) const {
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
      return JobOutcome{stop_requested_ ? JobState::kStopped : JobState::kCompleted, ErrorCode::kOk, "", false};
    }
    std::string why = WIFEXITED(status) ? "worker exited with status " + std::to_string(WEXITSTATUS(status))
                                        : "worker killed by signal " + std::to_string(WTERMSIG(status));
    return JobOutcome{JobState::kFailed, ErrorCode::kInternal, why, false};
  }
  void record(JobOutcome o) {
    outcome_ = std::move(o);
    done_ = true;
  }

  pid_t pid_;
  bool done_ = false;
  bool stop_requested_ = false;
  JobOutcome outcome_;
};

}  // namespace

ThreadLauncher::ThreadLauncher(std::shared_ptr<broker::BrokerApi> broker,
                               std::shared_ptr<cache::CacheApi> cache, runtime::JobOptions base,
                               std::filesystem::path metrics_dir, std::shared_ptr<FaultPlan> faults)
    : broker_(std::move(broker)),
      cache_(std::move(cache)),
      base_(std::move(base)),
      metrics_dir_(std::move(metrics_dir)),
      faults_(std::move(faults)) {
  if (!metrics_dir_.empty()) std::filesystem::create_directories(metrics_dir_);
}

std::unique_ptr<JobRunner> ThreadLauncher::launch(const runtime::JobSpec& spec) {
  runtime::JobOptions o = base_;
  if (!metrics_dir_.empty()) o.metrics_path = metrics_dir_ / (spec.job_id + ".metrics");
  if (faults_) o.before_commit = faults_->hook_for(spec.job_id);
  return std::make_unique<ThreadRunner>(runtime::Job::start(spec, broker_, cache_, std::move(o)));
}

ProcessLauncher::ProcessLauncher(std::vector<std::string> prefix, ArgsFn suffix)
    : prefix_(std::move(prefix)), suffix_(std::move(suffix)) {
  if (prefix_.empty()) raise(ErrorCode::kValidation, "empty worker command");
}

std::unique_ptr<JobRunner> ProcessLauncher::launch(const runtime::JobSpec& spec) {
  std::vector<std::string> args = prefix_;
  args.push_back(spec.job_id);
  if (suffix_) {
    for (auto& a : suffix_(spec)) args.push_back(std::move(a));
  }
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::fflush(nullptr);
  pid_t pid = ::fork();
  if (pid < 0) raise_errno("fork");
  if (pid == 0) {
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  return std::make_unique<ProcessRunner>(pid);
}

// ---- application -------------------------------------------------------------

Application::Application(AppGraph graph, DeployOptions options)
    : graph_(std::move(graph)), options_(std::move(options)), started_(std::chrono::steady_clock::now()) {}

std::unique_ptr<Application> Application::deploy(AppGraph graph, std::shared_ptr<broker::BrokerApi> broker,
                                                 DeployOptions options) {
  auto violations = validate(graph);
  if (has_errors(violations)) {
    std::string msg;
    for (const auto& v : violations) {
      if (v.severity == Severity::kError) msg += (msg.empty() ? "" : "; ") + format_violation(v);
    }
    raise(ErrorCode::kValidation, msg);
  }
  if (!options.launcher) raise(ErrorCode::kState, "no job launcher");
  std::unique_ptr<Application> app(new Application(std::move(graph), std::move(options)));
  app->order_ = topological_order(app->graph_);

  for (const auto& t : app->graph_.topics()) broker->create_topic(TopicName(t));
  if (app->options_.checkpoints) {
    for (const auto& j : app->graph_.jobs) app->options_.checkpoints->remove(j.job_id + ".eos");
  }

  std::unique_lock lock(app->mu_);
  for (const auto& j : app->graph_.jobs) app->slots_[j.job_id].spec = j;
  // Consumers first so nothing is produced into a topic nobody reads yet.
  for (auto it = app->order_.rbegin(); it != app->order_.rend(); ++it) {
    app->launch_locked(app->slots_.at(*it), false);
    if (app->state_ != AppState::kRunning) break;
  }
  lock.unlock();
  app->control_ = std::thread([a = app.get()] { a->control_loop(); });
  return app;
}

Application::~Application() {
  shutdown();
  if (control_.joinable()) control_.join();
}

void Application::event_locked(std::string kind, std::string job, std::string detail) {
  auto at = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - started_).count();
  log().info("app {}: {} {} {}", graph_.app_id, kind, job, detail);
  events_.push_back(SupervisorEvent{at, std::move(kind), std::move(job), std::move(detail)});
}

void Application::launch_locked(Slot& slot, bool restart) {
  try {
    slot.runner = options_.launcher->launch(slot.spec);
    slot.state = JobState::kRunning;
    std::string detail;
    if (auto p = slot.runner->start_position()) detail = "position " + std::to_string(*p);
    event_locked(restart ? "restart" : "start", slot.spec.job_id, detail);
  } catch (const std::exception& e) {
    slot.runner.reset();
    event_locked("failed", slot.spec.job_id, e.what());
    on_failure_locked(slot, e.what());
  }
}

void Application::on_failure_locked(Slot& slot, const std::string& why) {
  slot.state = JobState::kFailed;
  auto now = std::chrono::steady_clock::now();
  while (!slot.recent_restarts.empty() && now - slot.recent_restarts.front() > options_.policy.window) {
    slot.recent_restarts.pop_front();
  }
  if (slot.recent_restarts.size() >= options_.policy.max_restarts) {
    failed_job_ = slot.spec.job_id;
    failure_ = "job " + slot.spec.job_id + " failed after " + std::to_string(slot.total_restarts) +
               " restart(s): " + why;
    state_ = AppState::kFailed;
    return;
  }
  slot.recent_restarts.push_back(now);
  ++slot.total_restarts;
  const auto& b = options_.policy.backoff;
  Millis delay = b.empty() ? Millis{0} : b[std::min(slot.recent_restarts.size(), b.size()) - 1];
  slot.restart_at = now + delay;
}

void Application::stop_all_locked(std::unique_lock<std::mutex>& lock) {
  // Producers first: each consumer still drains what its producer wrote.
  for (const auto& id : order_) {
    Slot& s = slots_.at(id);
    s.restart_at.reset();
    if (!s.runner || s.state != JobState::kRunning) continue;
    s.runner->request_stop();
    lock.unlock();
    JobOutcome o = s.runner->wait();
    lock.lock();
    if (s.state == JobState::kRunning) s.state = o.state == JobState::kCompleted ? o.state : JobState::kStopped;
    event_locked("stop", id, runtime::to_string(o.state));
  }
}

void Application::finish_locked(AppState state) {
  state_ = state;
  finished_ = true;
  event_locked(std::string("app-") + to_string(state), "", state == AppState::kFailed ? failure_ : "");
  cv_.notify_all();
}

void Application::control_loop() {
  std::unique_lock lock(mu_);
  while (true) {
    if (state_ == AppState::kFailed) {
      stop_all_locked(lock);
      finish_locked(AppState::kFailed);
      return;
    }
    if (shutdown_requested_) {
      stop_all_locked(lock);
      finish_locked(AppState::kStopped);
      return;
    }
    auto now = std::chrono::steady_clock::now();
    bool all_done = true;
    for (const auto& id : order_) {
      Slot& s = slots_.at(id);
      if (s.state == JobState::kRunning && s.runner) {
        if (auto o = s.runner->poll()) {
          if (o->state == JobState::kCompleted) {
            s.state = JobState::kCompleted;
            event_locked("completed", id);
          } else {
            std::string why = o->state == JobState::kStopped ? "stopped unexpectedly" : o->error;
            event_locked("failed", id, why);
            on_failure_locked(s, why);
          }
        }
      } else if (s.state == JobState::kFailed && s.restart_at && now >= *s.restart_at) {
        s.restart_at.reset();
        launch_locked(s, true);
      }
      if (state_ == AppState::kFailed) break;
      if (s.state != JobState::kCompleted) all_done = false;
    }
    if (state_ == AppState::kFailed) continue;
    if (all_done) {
      finish_locked(AppState::kCompleted);
      return;
    }
    cv_.wait_for(lock, options_.poll_interval, [this] { return shutdown_requested_; });
  }
}

AppState Application::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

AppState Application::wait() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return finished_; });
  return state_;
}

bool Application::wait_for(Millis timeout) {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [this] { return finished_; });
}

void Application::shutdown() {
  {
    std::lock_guard lock(mu_);
    shutdown_requested_ = true;
    cv_.notify_all();
  }
  wait();
}

std::vector<SupervisorEvent> Application::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::string Application::failed_job() const {
  std::lock_guard lock(mu_);
  return failed_job_;
}

std::string Application::failure() const {
  std::lock_guard lock(mu_);
  return failure_;
}

std::map<std::string, JobState> Application::job_states() const {
  std::lock_guard lock(mu_);
  std::map<std::string, JobState> out;
  for (const auto& [id, s] : slots_) out[id] = s.state;
  return out;
}

std::map<std::string, std::size_t> Application::restart_counts() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::size_t> out;
  for (const auto& [id, s] : slots_) out[id] = s.total_restarts;
  return out;
}

}  // namespace edna::app
