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

#include <sys/wait.h>
#include <unistd.h>

#include <fcntl.h>

#include <csignal>
#include <thread>
#include <fstream>
#include <sstream>

#include "edna/broker/broker.hpp"
#include "edna/common/csv.hpp"
#include "edna/common/file_util.hpp"
#include "edna/runtime/keyed_store.hpp"
#include "temp_dir.hpp"

namespace {

using edna::testing::TempDir;
namespace fs = std::filesystem;

const std::string kExe = EDNA_CLI_PATH;
const std::string kSrc = EDNA_SOURCE_DIR;
const std::string kReference = kSrc + "/data/reference/edna-covid.conf";

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Result run(const TempDir& d, const std::string& args) {
  std::string cmd = quote(kExe) + " " + args + " > " + quote((d / "stdout").string()) + " 2> " +
                    quote((d / "stderr").string());
  int st = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = edna::read_file(d / "stdout");
  r.err = edna::read_file(d / "stderr");
  return r;
}

std::vector<std::string> store_rows(const fs::path& p) { return edna::runtime::KeyedStore::open(p, true)->dump(); }

TEST(Cli, RunReferenceThenInspectStatsReplay) {
  TempDir d;
  std::string root = (d / "b").string();
  auto r = run(d, "run " + quote(kReference) + " --budget 3000 --broker-root " + quote(root));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("completed"), std::string::npos);
  ASSERT_TRUE(fs::exists(root + "/edna-covid.db"));
  auto stats = edna::parse_csv(edna::read_file(root + "/window_stats.csv"));
  EXPECT_EQ(stats.columns, (std::vector<std::string>{"window_start", "keyword", "matches", "total", "fraction"}));
  EXPECT_FALSE(stats.rows.empty());

  // Metrics: every record taken in is accounted for.
  r = run(d, "inspect metrics --broker-root " + quote(root));
  ASSERT_EQ(r.code, 0);
  auto m = edna::parse_csv(r.out);
  ASSERT_EQ(m.rows.size(), 9u);
  for (const auto& row : m.rows) {
    EXPECT_EQ(std::stoull(row[1]), std::stoull(row[2]) + std::stoull(row[3]) + std::stoull(row[4])) << row[0];
  }

  // Replay equals the archive; partial + remainder equals full.
  r = run(d, "replay raw-tweets --broker-root " + quote(root) + " --out " + quote((d / "full").string()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(edna::read_file(d / "full"), edna::read_file(root + "/_archive/raw-tweets.frames"));
  run(d, "replay raw-tweets --broker-root " + quote(root) + " --include-control --out " + quote((d / "all").string()));
  r = run(d, "replay raw-tweets --broker-root " + quote(root) + " --include-control --from 1234 --out " +
                 quote((d / "tail").string()));
  ASSERT_EQ(r.code, 0);
  auto all = edna::read_file(d / "all");
  auto tail = edna::read_file(d / "tail");
  // first 1234 frames of the full dump
  std::string_view rest(all);
  std::size_t head_bytes = 0;
  for (int i = 0; i < 1234; ++i) {
    auto f = edna::decode_frame(rest.substr(head_bytes));
    head_bytes += f.size;
  }
  EXPECT_EQ(all.substr(0, head_bytes) + tail, all);

  r = run(d, "inspect topics --broker-root " + quote(root));
  auto topics = edna::parse_csv(r.out);
  std::string next;
  for (const auto& row : topics.rows) {
    if (row[0] == "raw-tweets") next = row[1];
  }
  ASSERT_FALSE(next.empty());
  r = run(d, "replay raw-tweets --broker-root " + quote(root) + " --from " + next);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  r = run(d, "replay raw-tweets --broker-root " + quote(root) + " --from " + std::to_string(std::stoull(next) + 1));
  EXPECT_EQ(r.code, 2);
  r = run(d, "replay nope --broker-root " + quote(root));
  EXPECT_EQ(r.code, 2);

  // Stats over the produced store.
  std::string db = quote(root + "/edna-covid.db");
  r = run(d, "stats language " + db);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(edna::parse_csv(r.out).columns, (std::vector<std::string>{"lang", "count", "pct"}));
  r = run(d, "stats drift " + db);
  EXPECT_EQ(r.code, 2);
  r = run(d, "stats drift " + db + " --keyword wuhan");
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(edna::parse_csv(r.out).rows.empty());
  r = run(d, "stats drift " + db + " --keyword never-seen");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(edna::parse_csv(r.out).rows.empty());
  EXPECT_NE(r.err.find("warning"), std::string::npos);

  r = run(d, "export-ids " + db + " --out " + quote((d / "ids.txt").string()));
  ASSERT_EQ(r.code, 0);
  std::ifstream ids(d / "ids.txt");
  std::size_t lines = 0;
  for (std::string l; std::getline(ids, l);) ++lines;
  EXPECT_EQ(lines, edna::runtime::KeyedStore::open(root + "/edna-covid.db", true)->count("tweets"));

  r = run(d, "inspect cache --broker-root " + quote(root));
  EXPECT_NE(r.out.find("keywords/misinformation/wikipedia"), std::string::npos);
}

TEST(Cli, FaultInjectionAndStandaloneMatchPlainRun) {
  TempDir d;
  auto base = run(d, "run " + quote(kReference) + " --budget 3000 --broker-root " + quote((d / "a").string()));
  ASSERT_EQ(base.code, 0) << base.err;
  auto faulty = run(d, "run " + quote(kReference) + " --budget 3000 --broker-root " + quote((d / "b").string()) +
                           " --inject-fault job=metadata,after=100,count=1 --inject-fault job=sql-upsert,after=500");
  ASSERT_EQ(faulty.code, 0) << faulty.err;
  EXPECT_NE(faulty.out.find("faults=2"), std::string::npos) << faulty.out;
  auto standalone = run(d, "run " + quote(kReference) + " --budget 3000 --mode standalone --broker-root " +
                               quote((d / "c").string()) + " --inject-fault job=sentiment,after=200");
  ASSERT_EQ(standalone.code, 0) << standalone.err;
  auto rows = store_rows(d / "a" / "edna-covid.db");
  EXPECT_FALSE(rows.empty());
  EXPECT_EQ(store_rows(d / "b" / "edna-covid.db"), rows);
  EXPECT_EQ(store_rows(d / "c" / "edna-covid.db"), rows);
}

TEST(Cli, ValidationAndUsageErrorsExitTwo) {
  TempDir d;
  std::ofstream(d / "cyclic.conf") << "[job]\nid = \"a\"\ningest.plugin = \"broker-topic\"\n"
                                      "ingest.config.topic = \"x\"\nemit.plugin = \"broker-topic\"\n"
                                      "emit.config.topic = \"y\"\n"
                                      "[job]\nid = \"b\"\ningest.plugin = \"broker-topic\"\n"
                                      "ingest.config.topic = \"y\"\nemit.plugin = \"broker-topic\"\n"
                                      "emit.config.topic = \"x\"\n";
  auto r = run(d, "run " + quote((d / "cyclic.conf").string()) + " --broker-root " + quote((d / "b").string()));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error: cycle: a -> b -> a"), std::string::npos) << r.err;
  r = run(d, "validate " + quote((d / "cyclic.conf").string()));
  EXPECT_EQ(r.code, 2);
  r = run(d, "validate " + quote(kReference));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run(d, "run " + quote((d / "missing.conf").string())).code, 2);
  EXPECT_EQ(run(d, "run " + quote(kReference) + " --no-such-flag").code, 2);
  EXPECT_EQ(run(d, "run " + quote(kReference) + " --inject-fault job=x,after=y").code, 2);
  EXPECT_EQ(run(d, "run " + quote(kReference) + " --mode cluster").code, 2);
  EXPECT_EQ(run(d, "").code, 2);
  EXPECT_EQ(run(d, "frobnicate").code, 2);
}

TEST(Cli, PersistentFaultExitsThree) {
  TempDir d;
  std::string conf = edna::read_file(kReference);
  auto pos = conf.find("max_restarts = 10");
  ASSERT_NE(pos, std::string::npos);
  conf.replace(pos, 17, "max_restarts = 0");
  // Paths in the copy must still resolve against the data directory.
  fs::create_directories(d / "reference");
  std::ofstream(d / "reference" / "edna-covid.conf") << conf;
  for (const char* sub : {"profiles", "keywords", "lexicon", "articles"}) {
    fs::create_directory_symlink(kSrc + "/data/" + sub, d / sub);
  }
  auto r = run(d, "run " + quote((d / "reference" / "edna-covid.conf").string()) + " --budget 2000 --broker-root " +
                      quote((d / "b").string()) + " --inject-fault job=sentiment,after=10,count=100");
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  EXPECT_NE(r.err.find("sentiment"), std::string::npos);
}

TEST(Cli, GenerateDeterministicAndValidated) {
  TempDir d;
  std::string profile = quote(kSrc + "/data/profiles/reference.json");
  ASSERT_EQ(run(d, "generate " + profile + " --budget 500 --seed 9 --out " + quote((d / "a").string())).code, 0);
  ASSERT_EQ(run(d, "generate " + profile + " --budget 500 --seed 9 --out " + quote((d / "b").string())).code, 0);
  ASSERT_EQ(run(d, "generate " + profile + " --budget 500 --seed 10 --out " + quote((d / "c").string())).code, 0);
  EXPECT_EQ(edna::read_file(d / "a"), edna::read_file(d / "b"));
  EXPECT_NE(edna::read_file(d / "a"), edna::read_file(d / "c"));
  ASSERT_EQ(run(d, "generate " + profile + " --budget 0 --out " + quote((d / "z").string())).code, 0);
  EXPECT_TRUE(fs::exists(d / "z"));
  EXPECT_EQ(fs::file_size(d / "z"), 0u);
  std::ofstream(d / "bad.json") << R"({"rate": -1, "schedule": []})";
  auto r = run(d, "generate " + quote((d / "bad.json").string()) + " --out " + quote((d / "x").string()));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("rate"), std::string::npos) << r.err;
  EXPECT_EQ(run(d, "generate " + quote((d / "none.json").string()) + " --out x").code, 2);
}

TEST(Cli, StatsOnFixtureAndEmptyStore) {
  TempDir d;
  auto r = run(d, "stats monthly " + quote(kSrc + "/data/fixtures/monthly_counts.csv") + " --format text");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("2020-01"), std::string::npos);
  EXPECT_NE(r.out.find("8,714,684"), std::string::npos);
  EXPECT_NE(r.out.find("546,855,074"), std::string::npos) << r.out;
  edna::runtime::KeyedStore::open(d / "empty.db");
  r = run(d, "stats monthly " + quote((d / "empty.db").string()));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "month,count\r\n");
  EXPECT_EQ(run(d, "stats monthly " + quote((d / "missing.db").string())).code, 2);
}

TEST(Cli, InspectFreshAndAfterAppends) {
  TempDir d;
  auto r = run(d, "inspect topics --broker-root " + quote((d / "none").string()));
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(edna::parse_csv(r.out).rows.empty());
  {
    auto b = edna::broker::Broker::recover(d / "b");
    edna::TopicName t("events");
    b->create_topic(t);
    edna::StreamRecord rec;
    for (int i = 0; i < 17; ++i) b->append(t, rec);
  }
  r = run(d, "inspect topics --broker-root " + quote((d / "b").string()));
  auto t = edna::parse_csv(r.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], "events");
  EXPECT_EQ(t.rows[0][1], "17");
  EXPECT_EQ(run(d, "inspect everything --broker-root x").code, 2);
}

TEST(Cli, SigintStopsCleanly) {
  TempDir d;
  pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    std::string root = (d / "b").string();
    int devnull = ::open("/dev/null", O_WRONLY);
    dup2(devnull, 1);
    dup2(devnull, 2);
    execl(kExe.c_str(), kExe.c_str(), "run", kReference.c_str(), "--budget", "100000000", "--broker-root",
          root.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(1500));
  kill(pid, SIGINT);
  int st = 0;
  waitpid(pid, &st, 0);
  ASSERT_TRUE(WIFEXITED(st));
  EXPECT_EQ(WEXITSTATUS(st), 0);
  EXPECT_TRUE(fs::exists(d / "b" / "window_stats.csv"));
}

}  // namespace
