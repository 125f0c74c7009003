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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edna/app/app_config.hpp"
#include "edna/app/fault.hpp"
#include "edna/app/prepare.hpp"
#include "edna/app/supervisor.hpp"
#include "edna/app/validate.hpp"
#include "edna/common/csv.hpp"
#include "edna/runtime/registry.hpp"

namespace edna::driver {

// Built-in plus covid-pipeline plugins.
std::shared_ptr<runtime::PluginRegistry> plugin_registry();

// Where a run keeps its state under the broker root.
struct Layout {
  std::filesystem::path root;
  std::filesystem::path state;        // <root>/_state
  std::filesystem::path checkpoints;  // <root>/_state/checkpoints
  std::filesystem::path metrics;      // <root>/_state/jobs/<job>.metrics
  std::filesystem::path cache_file;   // <root>/_state/cache.json
};
Layout layout_for(const std::filesystem::path& root);

struct RunOptions {
  std::optional<app::DeployMode> mode;
  std::string broker_root;  // overrides [broker] root
  app::RunOverrides overrides;
  std::vector<app::FaultSpec> faults;
  // Executable started for each job in standalone mode; it must accept
  // `run <config> --worker <job> ...`. Defaults to this process's image.
  std::string worker_exe;
};

struct Prepared {
  app::AppConfig config;
  std::filesystem::path config_path;
  std::filesystem::path config_dir;
  Layout layout;
  std::string run_id;
  std::string store;      // [app] store, expanded; may be empty
  std::string stats_csv;  // [app] stats_csv, expanded; may be empty
};

// Loads the config and applies variables, overrides and producer lists.
// Throws kNotFound, kParse or kValidation.
Prepared prepare(const std::string& config_path, const RunOptions& options, const std::string& run_id);

std::vector<app::Violation> validate_prepared(const Prepared& prepared);

struct RunReport {
  bool deployed = false;  // false: validation errors, nothing ran
  app::AppState state = app::AppState::kFailed;
  std::vector<app::Violation> violations;
  std::string failed_job;
  std::string failure;
  std::uint64_t faults_fired = 0;
  std::string store;
  std::string stats_csv;
};

// Deploys, waits for the application to finish (or for request_stop), then
// writes the stats CSV and a snapshot of the cache.
RunReport run_app(const std::string& config_path, const RunOptions& options);

// Standalone-mode worker: runs one job against a broker/cache server.
// Returns 0 when the job completed or stopped, 3 when it failed.
int run_worker(const std::string& config_path, const std::string& job_id, const std::string& connect,
               const RunOptions& options, const std::string& run_id);

// Async-signal-safe; asks a running run_app / run_worker to shut down.
void request_stop() noexcept;
void reset_stop() noexcept;

// ---- data tools ------------------------------------------------------------

// Frame file of `budget` generated records. Returns the count written.
std::uint64_t generate_corpus(const std::string& profile_path, const std::string& out_path,
                              std::uint64_t budget, std::optional<std::uint64_t> seed);

enum class StatsKind { kMonthly, kLanguage, kDrift };

struct StatsRequest {
  StatsKind kind = StatsKind::kMonthly;
  // A keyed store, or for monthly/language a fixture CSV (created_at,count
  // or lang,count) when the path ends in ".csv".
  std::string source;
  std::string keyword;      // drift
  std::size_t smoothing = 1;  // drift
};

struct StatsResult {
  Table table;
  std::vector<std::string> warnings;
};

StatsResult compute_stats(const StatsRequest& request);
// Aligned text with thousands separators and '%' signs.
std::string format_stats_text(StatsKind kind, const Table& table);

// Writes frames [from, next_offset) of a topic. kOutOfRange when from is
// past the end, kNotFound for an unknown topic. End-of-stream markers are
// skipped unless include_control. Returns the frame count written.
std::uint64_t replay_topic(const std::string& root, const std::string& topic, std::uint64_t from,
                           std::ostream& out, bool include_control = false);

Table inspect_topics(const std::string& root);
Table inspect_groups(const std::string& root);
Table inspect_metrics(const std::string& root);
Table inspect_cache(const std::string& root);

std::uint64_t export_ids(const std::string& store, const std::string& out_path);

}  // namespace edna::driver
