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

// edna: command-line driver over the C API.
#include <csignal>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edna/edna.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

int exit_for(edna_status s) {
  switch (s) {
    case EDNA_OK: return kExitOk;
    case EDNA_E_VALIDATION:
    case EDNA_E_NOT_FOUND:
    case EDNA_E_OUT_OF_RANGE:
    case EDNA_E_PARSE:
    case EDNA_E_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

int report_error(edna_status s) {
  std::fprintf(stderr, "edna: %s: %s\n", edna_status_name(s), edna_last_error());
  return exit_for(s);
}

// Takes ownership of a malloc'd C string.
std::string take(char* s) {
  std::string out = s ? s : "";
  edna_string_free(s);
  return out;
}

void on_signal(int) { edna_request_stop(); }

void install_signal_handlers() {
  struct sigaction sa;
  std::memset(&sa, 0, sizeof(sa));
  sa.sa_handler = on_signal;
  sigemptyset(&sa.sa_mask);
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
}

struct Options {
  edna_options* h = nullptr;
  Options() {
    if (edna_options_new(&h) != EDNA_OK) throw std::bad_alloc();
  }
  ~Options() { edna_options_free(h); }
  Options(const Options&) = delete;
  Options& operator=(const Options&) = delete;
};

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> window_width;
  std::string mode;
  std::string broker_root;
  std::vector<std::string> faults;
  std::string worker;
  std::string connect;
  std::string run_id;
};

edna_status fill_options(const RunArgs& a, Options& o) {
  edna_status s = EDNA_OK;
  if (!a.mode.empty() && (s = edna_options_set_mode(o.h, a.mode.c_str())) != EDNA_OK) return s;
  if (!a.broker_root.empty() && (s = edna_options_set_broker_root(o.h, a.broker_root.c_str())) != EDNA_OK) return s;
  if (a.budget && (s = edna_options_set_budget(o.h, *a.budget)) != EDNA_OK) return s;
  if (a.seed && (s = edna_options_set_seed(o.h, *a.seed)) != EDNA_OK) return s;
  if (a.window_width && (s = edna_options_set_window_width_ms(o.h, *a.window_width)) != EDNA_OK) return s;
  for (const auto& f : a.faults) {
    if ((s = edna_options_add_fault(o.h, f.c_str())) != EDNA_OK) return s;
  }
  return s;
}

void print_violations(const edna_report* r) {
  for (size_t i = 0; i < edna_report_violation_count(r); ++i) {
    std::fprintf(stderr, "%s\n", edna_report_violation(r, i));
  }
}

const char* state_name(edna_app_state s) {
  switch (s) {
    case EDNA_APP_RUNNING: return "running";
    case EDNA_APP_COMPLETED: return "completed";
    case EDNA_APP_STOPPED: return "stopped";
    case EDNA_APP_FAILED: return "failed";
    case EDNA_APP_NOT_DEPLOYED: return "not-deployed";
  }
  return "unknown";
}

int cmd_run(const RunArgs& a) {
  Options o;
  if (auto s = fill_options(a, o); s != EDNA_OK) return report_error(s);
  install_signal_handlers();

  if (!a.worker.empty()) {
    if (a.connect.empty() || a.run_id.empty()) {
      std::fprintf(stderr, "edna: --worker needs --connect and --run-id\n");
      return kExitUsage;
    }
    int code = kExitRuntime;
    auto s = edna_run_worker(a.config.c_str(), a.worker.c_str(), a.connect.c_str(), a.run_id.c_str(), o.h, &code);
    if (s != EDNA_OK) return report_error(s);
    return code;
  }

  edna_report* r = nullptr;
  if (auto s = edna_run(a.config.c_str(), o.h, &r); s != EDNA_OK) return report_error(s);
  print_violations(r);
  auto state = edna_report_state(r);
  int code = kExitOk;
  if (state == EDNA_APP_NOT_DEPLOYED) {
    code = kExitUsage;
  } else if (state == EDNA_APP_FAILED) {
    std::fprintf(stderr, "edna: job %s failed: %s\n", edna_report_failed_job(r), edna_report_failure(r));
    code = kExitRuntime;
  } else {
    std::printf("%s", state_name(state));
    if (*edna_report_store(r)) std::printf(" store=%s", edna_report_store(r));
    if (*edna_report_stats_csv(r)) std::printf(" stats=%s", edna_report_stats_csv(r));
    if (edna_report_faults_fired(r) > 0) {
      std::printf(" faults=%llu", static_cast<unsigned long long>(edna_report_faults_fired(r)));
    }
    std::printf("\n");
  }
  edna_report_free(r);
  return code;
}

int cmd_validate(const RunArgs& a) {
  Options o;
  if (auto s = fill_options(a, o); s != EDNA_OK) return report_error(s);
  edna_report* r = nullptr;
  if (auto s = edna_validate(a.config.c_str(), o.h, &r); s != EDNA_OK) return report_error(s);
  print_violations(r);
  int code = edna_report_has_errors(r) ? kExitUsage : kExitOk;
  if (code == kExitOk) std::printf("ok\n");
  edna_report_free(r);
  return code;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return true;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"EDNA stream processing driver"};
  cli.require_subcommand(1);
  cli.set_version_flag("--version", std::string(edna_version()));

  // run / validate share the option set.
  RunArgs run;
  auto* run_cmd = cli.add_subcommand("run", "Deploy an application and wait for it to finish");
  auto add_run_flags = [](CLI::App* c, RunArgs& a, bool full) {
    c->add_option("config", a.config, "Application config")->required();
    c->add_option("--broker-root", a.broker_root, "Broker directory (overrides [broker] root)");
    if (!full) return;
    c->add_option("--budget", a.budget, "Records produced by the generator");
    c->add_option("--seed", a.seed, "Generator seed");
    c->add_option("--mode", a.mode, "Deployment mode")->check(CLI::IsMember({"embedded", "standalone"}));
    c->add_option("--window-width", a.window_width, "Tumbling window width in ms");
    c->add_option("--inject-fault", a.faults, "job=<id>,after=<n>[,count=<n>]");
    c->add_option("--worker", a.worker)->group("");
    c->add_option("--connect", a.connect)->group("");
    c->add_option("--run-id", a.run_id)->group("");
  };
  add_run_flags(run_cmd, run, true);
  run_cmd->get_option("--inject-fault")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  RunArgs val;
  auto* val_cmd = cli.add_subcommand("validate", "Check an application config without running it");
  add_run_flags(val_cmd, val, false);

  std::string gen_profile, gen_out;
  std::uint64_t gen_budget = 10000;
  std::optional<std::uint64_t> gen_seed;
  auto* gen_cmd = cli.add_subcommand("generate", "Write a synthetic tweet corpus as a frame file");
  gen_cmd->add_option("profile", gen_profile, "Drift profile (JSON)")->required();
  gen_cmd->add_option("--out", gen_out, "Output frame file")->required();
  gen_cmd->add_option("--budget", gen_budget, "Record count")->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "Seed (default: from profile)");

  std::string stats_kind, stats_source, stats_keyword, stats_format = "csv", stats_out;
  std::size_t stats_smoothing = 1;
  auto* stats_cmd = cli.add_subcommand("stats", "Monthly, language or drift statistics");
  stats_cmd->add_option("kind", stats_kind, "Statistic")->required()->check(CLI::IsMember({"monthly", "language", "drift"}));
  stats_cmd->add_option("store", stats_source, "Keyed store, or a .csv fixture")->required();
  stats_cmd->add_option("--keyword", stats_keyword, "Keyword for drift");
  stats_cmd->add_option("--smoothing", stats_smoothing, "Moving-average width for drift")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--format", stats_format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "text"}));
  stats_cmd->add_option("--out", stats_out, "Output file (default stdout)");

  std::string replay_topic, replay_root = "edna-data", replay_out;
  std::uint64_t replay_from = 0;
  auto* replay_cmd = cli.add_subcommand("replay", "Dump a topic's frames from an offset");
  replay_cmd->add_option("topic", replay_topic, "Topic name")->required();
  replay_cmd->add_option("--broker-root", replay_root, "Broker directory")->capture_default_str();
  replay_cmd->add_option("--from", replay_from, "First offset");
  replay_cmd->add_option("--out", replay_out, "Output file (default stdout)");
  bool replay_control = false;
  replay_cmd->add_flag("--include-control", replay_control, "Keep end-of-stream markers");

  std::string inspect_target, inspect_root = "edna-data";
  auto* inspect_cmd = cli.add_subcommand("inspect", "Print broker, job or cache state as CSV");
  inspect_cmd->add_option("target", inspect_target)->required()->check(
      CLI::IsMember({"topics", "groups", "metrics", "cache"}));
  inspect_cmd->add_option("--broker-root", inspect_root, "Broker directory")->capture_default_str();

  std::string export_store, export_out;
  auto* export_cmd = cli.add_subcommand("export-ids", "Write stored tweet ids, one per line");
  export_cmd->add_option("store", export_store, "Keyed store")->required();
  export_cmd->add_option("--out", export_out, "Output file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = cli.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) return cmd_run(run);
  if (*val_cmd) return cmd_validate(val);

  if (*gen_cmd) {
    uint64_t written = 0;
    auto s = edna_generate(gen_profile.c_str(), gen_out.c_str(), gen_budget, gen_seed ? 1 : 0,
                           gen_seed.value_or(0), &written);
    if (s != EDNA_OK) return report_error(s);
    std::fprintf(stderr, "wrote %llu records to %s\n", static_cast<unsigned long long>(written), gen_out.c_str());
    return kExitOk;
  }

  if (*stats_cmd) {
    edna_stats_kind kind = stats_kind == "monthly"    ? EDNA_STATS_MONTHLY
                           : stats_kind == "language" ? EDNA_STATS_LANGUAGE
                                                      : EDNA_STATS_DRIFT;
    if (kind == EDNA_STATS_DRIFT && stats_keyword.empty()) {
      std::fprintf(stderr, "edna: stats drift requires --keyword\n");
      return kExitUsage;
    }
    char* text = nullptr;
    char* warnings = nullptr;
    auto s = edna_stats(stats_source.c_str(), kind, stats_keyword.empty() ? nullptr : stats_keyword.c_str(),
                        stats_smoothing, stats_format == "text" ? EDNA_FORMAT_TEXT : EDNA_FORMAT_CSV, &text,
                        &warnings);
    if (s != EDNA_OK) return report_error(s);
    std::string w = take(warnings);
    if (!w.empty()) std::fprintf(stderr, "warning: %s", w.c_str());
    if (!write_text(stats_out, take(text))) {
      std::fprintf(stderr, "edna: cannot write %s\n", stats_out.c_str());
      return kExitRuntime;
    }
    return kExitOk;
  }

  if (*replay_cmd) {
    uint64_t n = 0;
    auto s = edna_replay(replay_root.c_str(), replay_topic.c_str(), replay_from, replay_control ? 1 : 0,
                         replay_out.empty() || replay_out == "-" ? nullptr : replay_out.c_str(), &n);
    if (s != EDNA_OK) return report_error(s);
    std::fflush(stdout);
    std::fprintf(stderr, "replayed %llu frames\n", static_cast<unsigned long long>(n));
    return kExitOk;
  }

  if (*inspect_cmd) {
    char* csv = nullptr;
    auto s = edna_inspect(inspect_root.c_str(), inspect_target.c_str(), &csv);
    if (s != EDNA_OK) return report_error(s);
    write_text("", take(csv));
    return kExitOk;
  }

  if (*export_cmd) {
    uint64_t n = 0;
    auto s = edna_export_ids(export_store.c_str(), export_out.c_str(), &n);
    if (s != EDNA_OK) return report_error(s);
    std::fprintf(stderr, "exported %llu ids\n", static_cast<unsigned long long>(n));
    return kExitOk;
  }
  return kExitUsage;
}
