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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "edna/edna.h"

namespace {

namespace fs = std::filesystem;
const std::string kSrc = EDNA_SOURCE_DIR;

struct Dir {
  fs::path path;
  Dir() {
    char tmpl[] = "/tmp/edna-capi-XXXXXX";
    path = mkdtemp(tmpl);
  }
  ~Dir() { fs::remove_all(path); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  edna_string_free(s);
  return out;
}

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STRNE(edna_version(), "");
  EXPECT_STREQ(edna_status_name(EDNA_OK), "ok");
  EXPECT_STRNE(edna_status_name(EDNA_E_INVALID_ARGUMENT), "");
}

TEST(CApi, NullArgumentsAreRejected) {
  edna_report* rep = nullptr;
  EXPECT_EQ(edna_validate(nullptr, nullptr, &rep), EDNA_E_INVALID_ARGUMENT);
  EXPECT_NE(std::string(edna_last_error()), "");
  edna_options* o = nullptr;
  ASSERT_EQ(edna_options_new(&o), EDNA_OK);
  EXPECT_EQ(edna_options_set_mode(o, "cluster"), EDNA_E_VALIDATION);
  EXPECT_EQ(edna_options_set_window_width_ms(o, 0), EDNA_E_VALIDATION);
  EXPECT_EQ(edna_options_add_fault(o, "job="), EDNA_E_VALIDATION);
  EXPECT_EQ(edna_options_add_fault(o, "job=metadata,after=5"), EDNA_OK);
  edna_options_free(o);
}

TEST(CApi, ValidateReportsViolations) {
  Dir d;
  std::ofstream(d.path / "c.conf") << "[job]\nid = \"a\"\ningest.plugin = \"broker-topic\"\n"
                                      "ingest.config.topic = \"x\"\nemit.plugin = \"broker-topic\"\n"
                                      "emit.config.topic = \"x\"\n";
  edna_report* rep = nullptr;
  ASSERT_EQ(edna_validate((d.path / "c.conf").c_str(), nullptr, &rep), EDNA_OK);
  EXPECT_TRUE(edna_report_has_errors(rep));
  ASSERT_GT(edna_report_violation_count(rep), 0u);
  EXPECT_NE(std::string(edna_report_violation(rep, 0)).find("cycle"), std::string::npos);
  EXPECT_EQ(edna_report_violation(rep, 999), nullptr);
  edna_report_free(rep);
  EXPECT_EQ(edna_validate((d.path / "none.conf").c_str(), nullptr, &rep), EDNA_E_NOT_FOUND);
}

TEST(CApi, RunThenQuery) {
  Dir d;
  edna_options* o = nullptr;
  ASSERT_EQ(edna_options_new(&o), EDNA_OK);
  std::string root = (d.path / "b").string();
  ASSERT_EQ(edna_options_set_broker_root(o, root.c_str()), EDNA_OK);
  ASSERT_EQ(edna_options_set_budget(o, 1500), EDNA_OK);
  ASSERT_EQ(edna_options_set_seed(o, 3), EDNA_OK);
  edna_report* rep = nullptr;
  std::string conf = kSrc + "/data/reference/edna-covid.conf";
  ASSERT_EQ(edna_run(conf.c_str(), o, &rep), EDNA_OK) << edna_last_error();
  EXPECT_EQ(edna_report_state(rep), EDNA_APP_COMPLETED);
  EXPECT_STREQ(edna_report_failed_job(rep), "");
  std::string store = edna_report_store(rep);
  edna_report_free(rep);
  edna_options_free(o);

  char* text = nullptr;
  char* warnings = nullptr;
  ASSERT_EQ(edna_stats(store.c_str(), EDNA_STATS_MONTHLY, nullptr, 1, EDNA_FORMAT_CSV, &text, &warnings), EDNA_OK);
  EXPECT_EQ(take(text).rfind("month,count\r\n", 0), 0u);
  take(warnings);
  EXPECT_EQ(edna_stats(store.c_str(), EDNA_STATS_DRIFT, nullptr, 1, EDNA_FORMAT_CSV, &text, &warnings),
            EDNA_E_VALIDATION);

  ASSERT_EQ(edna_inspect(root.c_str(), "topics", &text), EDNA_OK);
  EXPECT_NE(take(text).find("raw-tweets"), std::string::npos);
  EXPECT_EQ(edna_inspect(root.c_str(), "bogus", &text), EDNA_E_VALIDATION);

  std::uint64_t n = 0;
  std::string ids = (d.path / "ids").string();
  ASSERT_EQ(edna_export_ids(store.c_str(), ids.c_str(), &n), EDNA_OK);
  EXPECT_GT(n, 0u);
  std::string out = (d.path / "replay").string();
  ASSERT_EQ(edna_replay(root.c_str(), "raw-tweets", 0, 0, out.c_str(), &n), EDNA_OK);
  EXPECT_EQ(n, 1500u);
  EXPECT_EQ(edna_replay(root.c_str(), "raw-tweets", 99999, 0, out.c_str(), &n), EDNA_E_OUT_OF_RANGE);
  EXPECT_FALSE(fs::exists(out));
}

TEST(CApi, Generate) {
  Dir d;
  std::uint64_t n = 0;
  std::string profile = kSrc + "/data/profiles/reference.json";
  std::string out = (d.path / "corpus").string();
  ASSERT_EQ(edna_generate(profile.c_str(), out.c_str(), 250, 1, 7, &n), EDNA_OK);
  EXPECT_EQ(n, 250u);
  EXPECT_GT(fs::file_size(out), 0u);
}

}  // namespace
