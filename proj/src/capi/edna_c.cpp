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

#include "edna/edna.h"

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "edna/common/error.hpp"
#include "edna/common/log.hpp"
#include "edna/driver/driver.hpp"

struct edna_options {
  edna::driver::RunOptions run;
};

struct edna_report {
  edna::driver::RunReport report;
  std::vector<std::string> formatted;
};

namespace {

thread_local std::string g_last_error;

edna_status fail(edna_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

template <typename Fn>
edna_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return EDNA_OK;
  } catch (const edna::Error& e) {
    return fail(static_cast<edna_status>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(EDNA_E_INTERNAL, e.what());
  } catch (...) {
    return fail(EDNA_E_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size());
  p[s.size()] = '\0';
  return p;
}

edna::driver::RunOptions options_or_default(const edna_options* o) {
  return o ? o->run : edna::driver::RunOptions{};
}

edna_report* make_report(edna::driver::RunReport r) {
  auto* rep = new edna_report{std::move(r), {}};
  for (const auto& v : rep->report.violations) rep->formatted.push_back(edna::app::format_violation(v));
  return rep;
}

}  // namespace

extern "C" {

const char* edna_version(void) { return "0.1.0"; }

const char* edna_status_name(edna_status status) {
  if (status == EDNA_E_INVALID_ARGUMENT) return "invalid-argument";
  if (static_cast<int>(status) < 0 || static_cast<int>(status) > 16) return "unknown";
  return edna::to_string(static_cast<edna::ErrorCode>(status));
}

const char* edna_last_error(void) { return g_last_error.c_str(); }

void edna_string_free(char* s) { std::free(s); }

edna_status edna_options_new(edna_options** out) {
  if (!out) return fail(EDNA_E_INVALID_ARGUMENT, "out is null");
  return guarded([&] { *out = new edna_options{}; });
}

void edna_options_free(edna_options* options) { delete options; }

edna_status edna_options_set_mode(edna_options* o, const char* mode) {
  if (!o || !mode) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  std::string m(mode);
  if (m == "embedded") o->run.mode = edna::app::DeployMode::kEmbedded;
  else if (m == "standalone") o->run.mode = edna::app::DeployMode::kStandalone;
  else return fail(EDNA_E_VALIDATION, "mode must be embedded or standalone, not '" + m + "'");
  return EDNA_OK;
}

edna_status edna_options_set_broker_root(edna_options* o, const char* root) {
  if (!o || !root) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  o->run.broker_root = root;
  return EDNA_OK;
}

edna_status edna_options_set_budget(edna_options* o, uint64_t budget) {
  if (!o) return fail(EDNA_E_INVALID_ARGUMENT, "null options");
  o->run.overrides.budget = budget;
  return EDNA_OK;
}

edna_status edna_options_set_seed(edna_options* o, uint64_t seed) {
  if (!o) return fail(EDNA_E_INVALID_ARGUMENT, "null options");
  o->run.overrides.seed = seed;
  return EDNA_OK;
}

edna_status edna_options_set_window_width_ms(edna_options* o, int64_t width_ms) {
  if (!o) return fail(EDNA_E_INVALID_ARGUMENT, "null options");
  if (width_ms <= 0) return fail(EDNA_E_VALIDATION, "window width must be positive");
  o->run.overrides.window_width_ms = width_ms;
  return EDNA_OK;
}

edna_status edna_options_add_fault(edna_options* o, const char* spec) {
  if (!o || !spec) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { o->run.faults.push_back(edna::app::parse_fault_spec(spec)); });
}

edna_status edna_options_set_worker_exe(edna_options* o, const char* path) {
  if (!o || !path) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  o->run.worker_exe = path;
  return EDNA_OK;
}

edna_status edna_validate(const char* config_path, const edna_options* options, edna_report** out) {
  if (!config_path || !out) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto p = edna::driver::prepare(config_path, options_or_default(options), "validate");
    edna::driver::RunReport r;
    r.violations = edna::driver::validate_prepared(p);
    r.state = edna::app::AppState::kFailed;
    r.store = p.store;
    r.stats_csv = p.stats_csv;
    *out = make_report(std::move(r));
  });
}

edna_status edna_run(const char* config_path, const edna_options* options, edna_report** out) {
  if (!config_path || !out) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = make_report(edna::driver::run_app(config_path, options_or_default(options))); });
}

edna_status edna_run_worker(const char* config_path, const char* job_id, const char* connect,
                            const char* run_id, const edna_options* options, int* exit_code) {
  if (!config_path || !job_id || !connect || !run_id || !exit_code) {
    return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *exit_code = edna::driver::run_worker(config_path, job_id, connect, options_or_default(options), run_id);
  });
}

void edna_request_stop(void) { edna::driver::request_stop(); }
void edna_reset_stop(void) { edna::driver::reset_stop(); }

edna_app_state edna_report_state(const edna_report* r) {
  if (!r || !r->report.deployed) return EDNA_APP_NOT_DEPLOYED;
  switch (r->report.state) {
    case edna::app::AppState::kRunning: return EDNA_APP_RUNNING;
    case edna::app::AppState::kCompleted: return EDNA_APP_COMPLETED;
    case edna::app::AppState::kStopped: return EDNA_APP_STOPPED;
    case edna::app::AppState::kFailed: return EDNA_APP_FAILED;
  }
  return EDNA_APP_FAILED;
}

int edna_report_has_errors(const edna_report* r) {
  return r && edna::app::has_errors(r->report.violations) ? 1 : 0;
}

size_t edna_report_violation_count(const edna_report* r) { return r ? r->formatted.size() : 0; }

const char* edna_report_violation(const edna_report* r, size_t index) {
  if (!r || index >= r->formatted.size()) return nullptr;
  return r->formatted[index].c_str();
}

const char* edna_report_failed_job(const edna_report* r) { return r ? r->report.failed_job.c_str() : ""; }
const char* edna_report_failure(const edna_report* r) { return r ? r->report.failure.c_str() : ""; }
uint64_t edna_report_faults_fired(const edna_report* r) { return r ? r->report.faults_fired : 0; }
const char* edna_report_store(const edna_report* r) { return r ? r->report.store.c_str() : ""; }
const char* edna_report_stats_csv(const edna_report* r) { return r ? r->report.stats_csv.c_str() : ""; }
void edna_report_free(edna_report* r) { delete r; }

edna_status edna_generate(const char* profile_path, const char* out_path, uint64_t budget, int has_seed,
                          uint64_t seed, uint64_t* written) {
  if (!profile_path || !out_path) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::optional<std::uint64_t> s;
    if (has_seed) s = seed;
    auto n = edna::driver::generate_corpus(profile_path, out_path, budget, s);
    if (written) *written = n;
  });
}

edna_status edna_stats(const char* source, edna_stats_kind kind, const char* keyword, size_t smoothing,
                       edna_stats_format format, char** out_text, char** warnings) {
  if (!source || !out_text) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  if (kind < EDNA_STATS_MONTHLY || kind > EDNA_STATS_DRIFT) return fail(EDNA_E_INVALID_ARGUMENT, "bad stats kind");
  if (warnings) *warnings = nullptr;
  return guarded([&] {
    edna::driver::StatsRequest req;
    req.kind = static_cast<edna::driver::StatsKind>(kind);
    req.source = source;
    req.keyword = keyword ? keyword : "";
    req.smoothing = smoothing;
    auto res = edna::driver::compute_stats(req);
    std::string text = format == EDNA_FORMAT_TEXT ? edna::driver::format_stats_text(req.kind, res.table)
                                                  : edna::to_csv(res.table);
    std::string warn;
    for (const auto& w : res.warnings) warn += w + "\n";
    *out_text = dup_string(text);
    if (warnings && !warn.empty()) *warnings = dup_string(warn);
  });
}

edna_status edna_replay(const char* broker_root, const char* topic, uint64_t from, int include_control,
                        const char* out_path, uint64_t* count) {
  if (!broker_root || !topic) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::uint64_t n = 0;
    if (out_path) {
      std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
      if (!f) edna::raise(edna::ErrorCode::kIo, std::string("cannot open ") + out_path);
      try {
        n = edna::driver::replay_topic(broker_root, topic, from, f, include_control != 0);
      } catch (...) {
        f.close();
        std::remove(out_path);
        throw;
      }
    } else {
      n = edna::driver::replay_topic(broker_root, topic, from, std::cout, include_control != 0);
    }
    if (count) *count = n;
  });
}

edna_status edna_inspect(const char* broker_root, const char* target, char** out_csv) {
  if (!broker_root || !target || !out_csv) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::string t(target);
    edna::Table table;
    if (t == "topics") table = edna::driver::inspect_topics(broker_root);
    else if (t == "groups") table = edna::driver::inspect_groups(broker_root);
    else if (t == "metrics") table = edna::driver::inspect_metrics(broker_root);
    else if (t == "cache") table = edna::driver::inspect_cache(broker_root);
    else edna::raise(edna::ErrorCode::kValidation, "unknown inspect target '" + t + "'");
    *out_csv = dup_string(edna::to_csv(table));
  });
}

edna_status edna_export_ids(const char* store_path, const char* out_path, uint64_t* count) {
  if (!store_path || !out_path) return fail(EDNA_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto n = edna::driver::export_ids(store_path, out_path);
    if (count) *count = n;
  });
}

}  // extern "C"
