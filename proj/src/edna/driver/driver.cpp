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

#include "edna/driver/driver.hpp"

#include <unistd.h>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "edna/broker/broker.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/common/log.hpp"
#include "edna/covid/generator.hpp"
#include "edna/covid/plugins.hpp"
#include "edna/covid/stats.hpp"
#include "edna/covid/store.hpp"
#include "edna/covid/text.hpp"
#include "edna/covid/window_stats.hpp"
#include "edna/net/client.hpp"
#include "edna/net/server.hpp"
#include "edna/runtime/checkpoint.hpp"
#include "edna/runtime/control.hpp"
#include "edna/runtime/job.hpp"
#include "edna/runtime/metrics.hpp"

namespace edna::driver {
namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

std::string new_run_id() {
  std::random_device rd;
  std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
                    static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string self_exe() {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  if (ec) raise(ErrorCode::kState, "cannot locate the running executable for worker processes");
  return p.string();
}

broker::BrokerOptions broker_options(const app::BrokerSettings& s) {
  broker::BrokerOptions o;
  o.segment_bytes = s.segment_bytes;
  o.flush = s.flush_every_append ? broker::FlushPolicy::kEveryAppend : broker::FlushPolicy::kInterval;
  o.flush_interval = s.flush_interval;
  return o;
}

std::vector<std::string> override_args(const RunOptions& o) {
  std::vector<std::string> a;
  if (o.overrides.budget) a.insert(a.end(), {"--budget", std::to_string(*o.overrides.budget)});
  if (o.overrides.seed) a.insert(a.end(), {"--seed", std::to_string(*o.overrides.seed)});
  if (o.overrides.window_width_ms) {
    a.insert(a.end(), {"--window-width", std::to_string(*o.overrides.window_width_ms)});
  }
  return a;
}

void write_cache_snapshot(const fs::path& path, const cache::StateCache& cache) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : cache.snapshot()) {
    arr.push_back({{"key", e.key},
                   {"version", e.version},
                   {"updated_at", format_iso8601(e.updated_at)},
                   {"value", e.value}});
  }
  atomic_write_file(path, arr.dump(1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
}

void write_stats_csv(const std::string& store_path, const std::string& csv_path) {
  if (store_path.empty() || csv_path.empty() || !fs::exists(store_path)) return;
  auto store = runtime::KeyedStore::open(store_path);
  Table t = covid::window_stats_table(covid::load_window_stats(*store));
  fs::path out(csv_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  atomic_write_file(out, to_csv(t));
}

}  // namespace

std::shared_ptr<runtime::PluginRegistry> plugin_registry() {
  auto r = std::make_shared<runtime::PluginRegistry>();
  runtime::register_builtin_plugins(*r);
  covid::register_covid_plugins(*r);
  return r;
}

Layout layout_for(const fs::path& root) {
  Layout l;
  l.root = root;
  l.state = root / "_state";
  l.checkpoints = l.state / "checkpoints";
  l.metrics = l.state / "jobs";
  l.cache_file = l.state / "cache.json";
  return l;
}

void request_stop() noexcept { g_stop.store(true); }
void reset_stop() noexcept { g_stop.store(false); }

Prepared prepare(const std::string& config_path, const RunOptions& options, const std::string& run_id) {
  Prepared p;
  p.config_path = fs::absolute(config_path).lexically_normal();
  p.config = app::load_app_config(p.config_path.string());
  p.config_dir = p.config_path.parent_path();
  if (options.mode) p.config.mode = *options.mode;
  std::string root = !options.broker_root.empty() ? options.broker_root
                     : !p.config.broker.root.empty() ? p.config.broker.root
                                                     : "edna-data";
  p.layout = layout_for(fs::absolute(root).lexically_normal());
  p.run_id = run_id;

  std::map<std::string, std::string> vars = {{"root", p.layout.root.string()},
                                             {"config_dir", p.config_dir.string()}};
  app::expand_variables(p.config.graph, vars);
  app::expand_config(p.config.app_values, vars);
  auto resolve = [&](const std::string& v) {
    if (v.empty()) return v;
    fs::path q(v);
    return (q.is_absolute() ? q : p.config_dir / q).lexically_normal().string();
  };
  p.store = resolve(p.config.app_values.get_string("store", ""));
  p.stats_csv = resolve(p.config.app_values.get_string("stats_csv", ""));

  app::inject_producers(p.config.graph, run_id);
  app::RunOverrides o = options.overrides;
  if (!o.cache_poll_interval_ms) o.cache_poll_interval_ms = p.config.cache_poll_interval.count();
  app::apply_overrides(p.config.graph, o);
  return p;
}

std::vector<app::Violation> validate_prepared(const Prepared& p) {
  auto registry = plugin_registry();
  return app::validate(p.config.graph, registry.get());
}

RunReport run_app(const std::string& config_path, const RunOptions& options) {
  RunReport report;
  Prepared p = prepare(config_path, options, new_run_id());
  report.store = p.store;
  report.stats_csv = p.stats_csv;
  report.violations = validate_prepared(p);
  if (app::has_errors(report.violations)) return report;

  const Layout& l = p.layout;
  fs::create_directories(l.checkpoints);
  fs::create_directories(l.metrics);
  auto registry = plugin_registry();
  auto broker = broker::Broker::recover(l.root, broker_options(p.config.broker));
  auto cache = std::make_shared<cache::StateCache>();
  auto checkpoints = std::make_shared<runtime::CheckpointStore>(l.checkpoints);
  auto faults = std::make_shared<app::FaultPlan>(options.faults);

  runtime::JobOptions base;
  base.registry = registry;
  base.checkpoints = checkpoints;
  base.base_dir = p.config_dir;

  std::unique_ptr<net::WireServer> server;
  app::DeployOptions d;
  d.policy = p.config.restart;
  d.checkpoints = checkpoints;
  if (p.config.mode == app::DeployMode::kStandalone) {
    server = std::make_unique<net::WireServer>(broker, cache);
    server->start("127.0.0.1", 0);
    std::string exe = options.worker_exe.empty() ? self_exe() : options.worker_exe;
    std::vector<std::string> prefix = {exe, "run", p.config_path.string(), "--worker"};
    std::string address = server->address();
    std::vector<std::string> common = {"--connect", address, "--broker-root", l.root.string(),
                                       "--run-id", p.run_id};
    for (auto& a : override_args(options)) common.push_back(a);
    d.launcher = std::make_shared<app::ProcessLauncher>(
        prefix, [common, faults](const runtime::JobSpec& spec) {
          std::vector<std::string> args = common;
          if (auto f = faults->take(spec.job_id)) {
            args.push_back("--inject-fault");
            args.push_back(app::format_fault_spec(*f));
          }
          return args;
        });
  } else {
    d.launcher = std::make_shared<app::ThreadLauncher>(broker, cache, base, l.metrics, faults);
  }

  auto application = app::Application::deploy(p.config.graph, broker, d);
  report.deployed = true;
  bool stop_sent = false;
  while (!application->wait_for(Millis{100})) {
    if (g_stop.load() && !stop_sent) {
      log().info("stop requested; shutting down {}", p.config.graph.app_id);
      application->shutdown();
      stop_sent = true;
    }
  }
  report.state = application->state();
  report.failed_job = application->failed_job();
  report.failure = application->failure();
  // In standalone mode a pending crash is handed out once per launch.
  report.faults_fired = faults->fired();
  if (p.config.mode == app::DeployMode::kStandalone) {
    std::uint64_t requested = 0, left = 0;
    for (const auto& f : options.faults) {
      requested += f.count;
    }
    for (const auto& j : p.config.graph.jobs) left += faults->remaining(j.job_id);
    report.faults_fired = requested - std::min(requested, left);
  }
  application.reset();
  if (server) server->stop();

  if (report.state == app::AppState::kCompleted || report.state == app::AppState::kStopped) {
    write_stats_csv(p.store, p.stats_csv);
  }
  write_cache_snapshot(l.cache_file, *cache);
  return report;
}

int run_worker(const std::string& config_path, const std::string& job_id, const std::string& connect,
               const RunOptions& options, const std::string& run_id) {
  Prepared p = prepare(config_path, options, run_id);
  const runtime::JobSpec* spec = p.config.graph.find_job(job_id);
  if (!spec) raise(ErrorCode::kValidation, "no job '" + job_id + "' in " + config_path);
  auto broker = std::make_shared<net::RemoteBroker>(std::make_shared<net::WireClient>(connect));
  auto cache = std::make_shared<net::RemoteCache>(std::make_shared<net::WireClient>(connect));
  fs::create_directories(p.layout.metrics);

  runtime::JobOptions o;
  o.registry = plugin_registry();
  o.checkpoints = std::make_shared<runtime::CheckpointStore>(p.layout.checkpoints);
  o.base_dir = p.config_dir;
  o.metrics_path = p.layout.metrics / (job_id + ".metrics");
  auto faults = std::make_shared<app::FaultPlan>(options.faults);
  if (!options.faults.empty()) o.before_commit = faults->hook_for(job_id);

  std::unique_ptr<runtime::Job> job;
  try {
    job = runtime::Job::start(*spec, broker, cache, std::move(o));
  } catch (const Error& e) {
    log().error("{}: {}", job_id, e.what());
    return 3;
  }
  bool stop_sent = false;
  while (!job->outcome()) {
    if (g_stop.load() && !stop_sent) {
      job->request_stop();
      stop_sent = true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  runtime::JobOutcome out = job->wait();
  if (out.state == runtime::JobState::kCompleted || out.state == runtime::JobState::kStopped) return 0;
  if (out.injected) log().warn("{}: injected crash", job_id);
  else log().error("{} failed: {}", job_id, out.error);
  return 3;
}

// ---- data tools ------------------------------------------------------------

std::uint64_t generate_corpus(const std::string& profile_path, const std::string& out_path,
                              std::uint64_t budget, std::optional<std::uint64_t> seed) {
  if (!fs::exists(profile_path)) raise(ErrorCode::kNotFound, "profile " + profile_path + " not found");
  covid::DriftProfile profile = covid::load_drift_profile(profile_path);
  if (seed) profile.seed = *seed;
  covid::TweetGenerator gen(std::move(profile));
  fs::path out(out_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  covid::write_corpus(gen, budget, out);
  return budget;
}

namespace {

bool is_fixture(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

std::unique_ptr<runtime::KeyedStore> open_existing_store(const std::string& path) {
  if (!fs::exists(path)) raise(ErrorCode::kNotFound, "store " + path + " not found");
  return runtime::KeyedStore::open(path, true);
}

}  // namespace

StatsResult compute_stats(const StatsRequest& r) {
  StatsResult out;
  switch (r.kind) {
    case StatsKind::kMonthly:
      if (is_fixture(r.source)) {
        if (!fs::exists(r.source)) raise(ErrorCode::kNotFound, "fixture " + r.source + " not found");
        out.table = covid::monthly_counts_from_fixture(read_file(r.source)).table();
      } else {
        out.table = covid::monthly_counts(*open_existing_store(r.source)).table();
      }
      break;
    case StatsKind::kLanguage:
      if (is_fixture(r.source)) {
        if (!fs::exists(r.source)) raise(ErrorCode::kNotFound, "fixture " + r.source + " not found");
        out.table = covid::language_counts_from_fixture(read_file(r.source)).table();
      } else {
        out.table = covid::language_counts(*open_existing_store(r.source)).table();
      }
      break;
    case StatsKind::kDrift: {
      if (r.keyword.empty()) raise(ErrorCode::kValidation, "drift needs a keyword");
      auto stats = covid::load_window_stats(*open_existing_store(r.source));
      std::string k = covid::normalize_keyword(r.keyword);
      out.table.columns = {"window_start", "keyword", "fraction"};
      bool known = false;
      for (const auto& s : stats) known = known || s.per_keyword.count(k);
      if (!known) {
        out.warnings.push_back("keyword '" + r.keyword + "' does not occur in any window; empty series");
        break;
      }
      for (const auto& [t, f] : covid::drift_fraction(stats, k, std::max<std::size_t>(1, r.smoothing))) {
        out.table.rows.push_back({format_iso8601(t), k, covid::format_double(f)});
      }
      break;
    }
  }
  return out;
}

std::string format_stats_text(StatsKind kind, const Table& table) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back(table.columns);
  for (const auto& r : table.rows) {
    std::vector<std::string> row = r;
    if (kind != StatsKind::kDrift && row.size() >= 2) {
      row[1] = covid::format_thousands(std::stoull(row[1]));
    }
    if (kind == StatsKind::kLanguage && row.size() >= 3) row[2] += "%";
    rows.push_back(std::move(row));
  }
  if (kind != StatsKind::kDrift) {
    std::uint64_t sum = 0;
    for (const auto& r : table.rows) sum += std::stoull(r[1]);
    std::vector<std::string> row(table.columns.size());
    row[0] = "total";
    row[1] = covid::format_thousands(sum);
    if (kind == StatsKind::kLanguage && row.size() >= 3) row[2] = table.rows.empty() ? "" : "100.0%";
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      // first column left-aligned, the rest right-aligned
      std::string pad(width[i] - r[i].size(), ' ');
      if (i == 0) out << r[i] << pad;
      else out << "  " << pad << r[i];
    }
    out << "\n";
  }
  return out.str();
}

namespace {

std::shared_ptr<broker::Broker> open_broker_read_only(const std::string& root) {
  broker::BrokerOptions o;
  o.read_only = true;
  return broker::Broker::recover(root, o);
}

}  // namespace

std::uint64_t replay_topic(const std::string& root, const std::string& topic, std::uint64_t from,
                           std::ostream& out, bool include_control) {
  if (!fs::is_directory(root)) raise(ErrorCode::kNotFound, "broker root " + root + " not found");
  if (!TopicName::is_valid(topic)) raise(ErrorCode::kValidation, "invalid topic name '" + topic + "'");
  auto b = open_broker_read_only(root);
  TopicName t(topic);
  bool exists = false;
  for (const auto& info : b->topics()) exists = exists || info.name == topic;
  if (!exists) raise(ErrorCode::kNotFound, "topic '" + topic + "' not found");
  Offset next = b->next_offset(t);
  if (from > next) {
    raise(ErrorCode::kOutOfRange,
          "offset " + std::to_string(from) + " is past the end of '" + topic + "' (" + std::to_string(next) + ")");
  }
  std::uint64_t n = 0;
  Bytes buf;
  while (from < next) {
    auto batch = b->fetch(t, from, 4096);
    if (batch.empty()) break;
    buf.clear();
    for (const auto& f : batch) {
      if (!include_control && runtime::is_end_of_stream(f.record)) continue;
      append_frame(buf, f.record);
      ++n;
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    from = batch.back().offset + 1;
  }
  out.flush();
  if (!out) raise(ErrorCode::kIo, "write failed during replay");
  return n;
}

Table inspect_topics(const std::string& root) {
  Table t;
  t.columns = {"topic", "next_offset", "segments", "bytes", "status"};
  if (!fs::is_directory(root)) return t;
  auto b = open_broker_read_only(root);
  for (const auto& info : b->topics()) {
    t.rows.push_back({info.name, std::to_string(info.next_offset), std::to_string(info.segments),
                      std::to_string(info.bytes), "ok"});
  }
  for (const auto& q : b->quarantined()) t.rows.push_back({q.name, "", "", "", "quarantined: " + q.reason});
  std::sort(t.rows.begin(), t.rows.end());
  return t;
}

Table inspect_groups(const std::string& root) {
  Table t;
  t.columns = {"group", "topic", "next_offset"};
  if (!fs::is_directory(root)) return t;
  auto b = open_broker_read_only(root);
  for (const auto& g : b->group_offsets()) t.rows.push_back({g.group, g.topic, std::to_string(g.next)});
  std::sort(t.rows.begin(), t.rows.end());
  return t;
}

Table inspect_metrics(const std::string& root) {
  Table t;
  t.columns = {"job", "records_in", "records_out", "dropped", "dead_lettered", "held",
               "last_committed_offset", "emitted", "max_in_flight", "ingest_pauses", "batches", "counters"};
  fs::path dir = layout_for(root).metrics;
  if (!fs::is_directory(dir)) return t;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".metrics") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    runtime::MetricsSnapshot m = runtime::read_metrics_file(f);
    std::string counters;
    for (const auto& [k, v] : m.extra) {
      if (!counters.empty()) counters += ';';
      counters += k + "=" + std::to_string(v);
    }
    t.rows.push_back({f.stem().string(), std::to_string(m.records_in), std::to_string(m.records_out),
                      std::to_string(m.dropped), std::to_string(m.dead_lettered), std::to_string(m.held),
                      m.last_committed_offset ? std::to_string(*m.last_committed_offset) : "none",
                      std::to_string(m.emitted), std::to_string(m.max_in_flight),
                      std::to_string(m.ingest_pauses), std::to_string(m.batches), counters});
  }
  return t;
}

Table inspect_cache(const std::string& root) {
  Table t;
  t.columns = {"key", "version", "updated_at", "value"};
  fs::path f = layout_for(root).cache_file;
  if (!fs::exists(f)) return t;
  auto j = nlohmann::json::parse(read_file(f), nullptr, false);
  if (j.is_discarded() || !j.is_array()) raise(ErrorCode::kParse, f.string() + " is not a cache snapshot");
  for (const auto& e : j) {
    t.rows.push_back({e.value("key", ""), std::to_string(e.value("version", std::uint64_t{0})),
                      e.value("updated_at", ""), e.value("value", "")});
  }
  return t;
}

std::uint64_t export_ids(const std::string& store, const std::string& out_path) {
  auto s = open_existing_store(store);
  return covid::export_tweet_ids(*s, out_path);
}

}  // namespace edna::driver
