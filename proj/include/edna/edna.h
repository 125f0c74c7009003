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

/* EDNA C API: run stream-processing applications, generate corpora and
 * compute statistics. Every function reports failure through an
 * edna_status; the message for the last failure on the calling thread is
 * available from edna_last_error(). Objects are opaque handles owned by the
 * caller and released with the matching _free function. */
#ifndef EDNA_EDNA_H
#define EDNA_EDNA_H

#include <stddef.h>
#include <stdint.h>

#if defined(EDNA_BUILDING_LIBRARY)
#define EDNA_API __attribute__((visibility("default")))
#else
#define EDNA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum edna_status {
  EDNA_OK = 0,
  EDNA_E_VALIDATION = 1,
  EDNA_E_NOT_FOUND = 2,
  EDNA_E_OUT_OF_RANGE = 3,
  EDNA_E_STALE_COMMIT = 4,
  EDNA_E_IO = 5,
  EDNA_E_CORRUPT_LOG = 6,
  EDNA_E_FRAME_TOO_LARGE = 7,
  EDNA_E_INCOMPLETE_FRAME = 8,
  EDNA_E_UNSUPPORTED_VERSION = 9,
  EDNA_E_CORRUPT_FRAME = 10,
  EDNA_E_PARSE = 11,
  EDNA_E_PLUGIN = 12,
  EDNA_E_STATE = 13,
  EDNA_E_PROTOCOL = 14,
  EDNA_E_UNAVAILABLE = 15,
  EDNA_E_INTERNAL = 16,
  EDNA_E_INVALID_ARGUMENT = 100 /* null handle, bad enum value */
} edna_status;

typedef enum edna_app_state {
  EDNA_APP_RUNNING = 0,
  EDNA_APP_COMPLETED = 1,
  EDNA_APP_STOPPED = 2,
  EDNA_APP_FAILED = 3,
  EDNA_APP_NOT_DEPLOYED = 4 /* validation errors; nothing ran */
} edna_app_state;

typedef enum edna_stats_kind {
  EDNA_STATS_MONTHLY = 0,
  EDNA_STATS_LANGUAGE = 1,
  EDNA_STATS_DRIFT = 2
} edna_stats_kind;

typedef enum edna_stats_format {
  EDNA_FORMAT_CSV = 0,  /* RFC 4180 with header */
  EDNA_FORMAT_TEXT = 1  /* aligned, thousands separators */
} edna_stats_format;

typedef struct edna_options edna_options;
typedef struct edna_report edna_report;

EDNA_API const char* edna_version(void);
EDNA_API const char* edna_status_name(edna_status status);
/* Message of the last failed call on this thread; "" if none. */
EDNA_API const char* edna_last_error(void);
/* Strings returned through char** out-parameters. */
EDNA_API void edna_string_free(char* s);

/* ---- run options ---- */
EDNA_API edna_status edna_options_new(edna_options** out);
EDNA_API void edna_options_free(edna_options* options);
/* "embedded" or "standalone" */
EDNA_API edna_status edna_options_set_mode(edna_options* options, const char* mode);
EDNA_API edna_status edna_options_set_broker_root(edna_options* options, const char* root);
EDNA_API edna_status edna_options_set_budget(edna_options* options, uint64_t budget);
EDNA_API edna_status edna_options_set_seed(edna_options* options, uint64_t seed);
EDNA_API edna_status edna_options_set_window_width_ms(edna_options* options, int64_t width_ms);
/* "job=<id>,after=<n>[,count=<n>]"; may be called repeatedly. */
EDNA_API edna_status edna_options_add_fault(edna_options* options, const char* spec);
/* Executable started per job in standalone mode (default: this process). */
EDNA_API edna_status edna_options_set_worker_exe(edna_options* options, const char* path);

/* ---- applications ---- */
/* Parses and validates; the report lists violations. options may be NULL. */
EDNA_API edna_status edna_validate(const char* config_path, const edna_options* options,
                                   edna_report** out);
/* Deploys and blocks until the application completes, fails or is stopped
 * with edna_request_stop(). Validation errors are not a failure of the
 * call: the report says EDNA_APP_NOT_DEPLOYED and lists them. */
EDNA_API edna_status edna_run(const char* config_path, const edna_options* options,
                              edna_report** out);
/* Runs one job of a standalone deployment against the server at `connect`.
 * exit_code: 0 completed or stopped, 3 failed. */
EDNA_API edna_status edna_run_worker(const char* config_path, const char* job_id,
                                     const char* connect, const char* run_id,
                                     const edna_options* options, int* exit_code);
/* Async-signal-safe. */
EDNA_API void edna_request_stop(void);
EDNA_API void edna_reset_stop(void);

EDNA_API edna_app_state edna_report_state(const edna_report* report);
EDNA_API int edna_report_has_errors(const edna_report* report);
EDNA_API size_t edna_report_violation_count(const edna_report* report);
/* "error: cycle: a -> b -> a" */
EDNA_API const char* edna_report_violation(const edna_report* report, size_t index);
/* Empty strings when no job failed. */
EDNA_API const char* edna_report_failed_job(const edna_report* report);
EDNA_API const char* edna_report_failure(const edna_report* report);
EDNA_API uint64_t edna_report_faults_fired(const edna_report* report);
EDNA_API const char* edna_report_store(const edna_report* report);
EDNA_API const char* edna_report_stats_csv(const edna_report* report);
EDNA_API void edna_report_free(edna_report* report);

/* ---- data tools ---- */
EDNA_API edna_status edna_generate(const char* profile_path, const char* out_path, uint64_t budget,
                                   int has_seed, uint64_t seed, uint64_t* written);
/* source: keyed store, or a .csv fixture for monthly/language. keyword is
 * required for drift. *warnings may be set to NULL when there are none. */
EDNA_API edna_status edna_stats(const char* source, edna_stats_kind kind, const char* keyword,
                                size_t smoothing, edna_stats_format format, char** out_text,
                                char** warnings);
/* Frames from `from` to the end of the topic; out_path NULL writes stdout.
 * End-of-stream markers are left out unless include_control is nonzero. */
EDNA_API edna_status edna_replay(const char* broker_root, const char* topic, uint64_t from,
                                 int include_control, const char* out_path, uint64_t* count);
/* target: "topics", "groups", "metrics" or "cache". CSV. */
EDNA_API edna_status edna_inspect(const char* broker_root, const char* target, char** out_csv);
EDNA_API edna_status edna_export_ids(const char* store_path, const char* out_path, uint64_t* count);

#ifdef __cplusplus
}
#endif

#endif /* EDNA_EDNA_H */
