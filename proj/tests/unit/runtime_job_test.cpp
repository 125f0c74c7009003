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

#include <random>

#include "edna/broker/broker.hpp"
#include "edna/runtime/job.hpp"
#include "edna/runtime/keyed_store.hpp"
#include "edna/runtime/registry.hpp"
#include "runtime_fixtures.hpp"
#include "temp_dir.hpp"

namespace edna::runtime {
namespace {

using testing::CollectSink;
using testing::CollectSinkState;
using testing::TempDir;
using testing::text_record;
using testing::VectorSource;
using testing::VectorSourceState;

class JobTest : public ::testing::Test {
 protected:
  void SetUp() override {
    broker_ = broker::Broker::recover(dir_ / "broker");
    cache_ = std::make_shared<cache::StateCache>();
    registry_ = std::make_shared<PluginRegistry>();
    register_builtin_plugins(*registry_);
    source_ = std::make_shared<VectorSourceState>();
    sink_ = std::make_shared<CollectSinkState>();
    registry_->add_ingest("vector", [s = source_](const PluginContext&) {
      return std::make_unique<VectorSource>(s);
    });
    registry_->add_emit("collect", [s = sink_](const PluginContext&) {
      return std::make_unique<CollectSink>(s);
    });
  }

  JobSpec spec(std::vector<ProcessSpec> chain = {}) {
    JobSpec s;
    s.job_id = "job";
    s.ingest.plugin = "vector";
    s.emit.plugin = "collect";
    s.process_chain = std::move(chain);
    s.batch_size = 16;
    s.buffer_capacity = 64;
    return s;
  }

  JobOptions options() {
    JobOptions o;
    o.registry = registry_;
    o.checkpoints = std::make_shared<CheckpointStore>(dir_ / "state");
    o.retry.base = Millis{1};
    o.retry.cap = Millis{5};
    o.idle_wait = Millis{1};
    return o;
  }

  JobOutcome run(JobSpec s, JobOptions o) {
    auto job = Job::start(std::move(s), broker_, cache_, std::move(o));
    last_metrics_ = job->metrics();
    JobOutcome out = job->wait();
    last_metrics_ = job->metrics();
    return out;
  }

  void fill(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      source_->records.push_back(text_record("r" + std::to_string(i), static_cast<std::int64_t>(i)));
    }
  }

  std::vector<broker::FetchedRecord> dlq() {
    return broker_->fetch(TopicName("job.dlq"), 0, 1'000'000);
  }

  TempDir dir_;
  std::shared_ptr<broker::Broker> broker_;
  std::shared_ptr<cache::StateCache> cache_;
  std::shared_ptr<PluginRegistry> registry_;
  std::shared_ptr<VectorSourceState> source_;
  std::shared_ptr<CollectSinkState> sink_;
  MetricsSnapshot last_metrics_;
};

TEST_F(JobTest, PassThroughKeepsOrder) {
  fill(100);
  JobOutcome o = run(spec(), options());
  EXPECT_EQ(o.state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot(), source_->records);
  EXPECT_EQ(sink_->finish_calls.load(), 1);
  EXPECT_EQ(source_->committed.load(), 100u);
  EXPECT_EQ(last_metrics_.records_in, 100u);
  EXPECT_EQ(last_metrics_.records_out, 100u);
  EXPECT_EQ(*last_metrics_.last_committed_offset, 100u);
}

TEST_F(JobTest, ThrowingMapRoutesRecordToDeadLetterTopic) {
  fill(10);
  registry_->add_map("boom-on-7", [](const PluginContext&) {
    return std::make_unique<testing::LambdaMap>([](const StreamRecord& r) {
      if (r.payload == "r6") throw std::runtime_error("bad record");
      return r;
    });
  });
  JobOutcome o = run(spec({{ProcessKind::kMap, "boom-on-7", {}}}), options());
  EXPECT_EQ(o.state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot().size(), 9u);
  auto letters = dlq();
  ASSERT_EQ(letters.size(), 1u);
  DeadLetter d = decode_dead_letter(letters[0].record);
  EXPECT_EQ(d.reason, "error");
  EXPECT_EQ(d.original, source_->records[6]);
  EXPECT_EQ(last_metrics_.dead_lettered, 1u);
  EXPECT_EQ(last_metrics_.records_out, 9u);
}

TEST_F(JobTest, BuiltinMaps) {
  fill(3);
  source_->records[0].payload = "abc";
  JobOutcome o = run(spec({{ProcessKind::kMap, "identity", {}}, {ProcessKind::kMap, "uppercase", {}}}),
                     options());
  ASSERT_EQ(o.state, JobState::kCompleted);
  auto got = sink_->snapshot();
  EXPECT_EQ(got[0].payload, "ABC");
  EXPECT_EQ(got[0].event_time, source_->records[0].event_time);
  EXPECT_EQ(got[1].payload, "R1");
}

TEST_F(JobTest, MapChainEqualsFunctionComposition) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ch('a', 'z');
  for (int i = 0; i < 200; ++i) {
    std::string p;
    for (int k = 0; k < 1 + i % 13; ++k) p += static_cast<char>(ch(rng));
    source_->records.push_back(text_record(p, i));
  }
  auto f = [](StreamRecord r) {
    r.payload += "!";
    return r;
  };
  auto g = [](StreamRecord r) {
    std::reverse(r.payload.begin(), r.payload.end());
    r.event_time += Millis{5};
    return r;
  };
  registry_->add_map("f", [f](const PluginContext&) { return std::make_unique<testing::LambdaMap>(f); });
  registry_->add_map("g", [g](const PluginContext&) { return std::make_unique<testing::LambdaMap>(g); });
  ASSERT_EQ(run(spec({{ProcessKind::kMap, "f", {}}, {ProcessKind::kMap, "g", {}}}), options()).state,
            JobState::kCompleted);
  auto got = sink_->snapshot();
  ASSERT_EQ(got.size(), source_->records.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], g(f(source_->records[i])));
}

TEST_F(JobTest, FilterAlwaysFalseCountsDrops) {
  fill(50);
  registry_->add_filter("none", [](const PluginContext&) {
    return std::make_unique<testing::LambdaFilter>([](const StreamRecord&) { return false; });
  });
  ASSERT_EQ(run(spec({{ProcessKind::kFilter, "none", {}}}), options()).state, JobState::kCompleted);
  EXPECT_TRUE(sink_->snapshot().empty());
  EXPECT_EQ(last_metrics_.dropped, 50u);
  EXPECT_EQ(source_->committed.load(), 50u);
}

TEST_F(JobTest, RandomFilterPartitionsInput) {
  fill(500);
  std::set<std::string> expected_pass;
  for (const auto& r : source_->records) {
    if (partition_hash(r.payload) % 3 == 0) expected_pass.insert(r.payload);
  }
  PluginConfig c;
  c.set("partitions", ConfigValue::number("3"));
  c.set("index", ConfigValue::number("0"));
  ASSERT_EQ(run(spec({{ProcessKind::kFilter, "key-hash-partition", c}}), options()).state,
            JobState::kCompleted);
  std::set<std::string> passed;
  for (const auto& r : sink_->snapshot()) passed.insert(r.payload);
  EXPECT_EQ(passed, expected_pass);
  EXPECT_EQ(last_metrics_.dropped + passed.size(), 500u);
}

TEST_F(JobTest, FlatMapSplitLinesConservesWeight) {
  source_->records = {text_record("a\nb\nc"), text_record(""), text_record("d")};
  ASSERT_EQ(run(spec({{ProcessKind::kFlatMap, "split-lines", {}}}), options()).state,
            JobState::kCompleted);
  auto got = sink_->snapshot();
  ASSERT_EQ(got.size(), 4u);
  EXPECT_EQ(got[3].payload, "d");
  EXPECT_EQ(last_metrics_.records_in, 3u);
  EXPECT_EQ(last_metrics_.records_out, 2u);
  EXPECT_EQ(last_metrics_.dropped, 1u);
}

TEST_F(JobTest, UnknownPluginFailsAtStartNamingIt) {
  JobSpec s = spec({{ProcessKind::kMap, "no-such-map", {}}});
  try {
    Job::start(s, broker_, cache_, options());
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlugin);
    EXPECT_NE(std::string(e.what()).find("no-such-map"), std::string::npos);
  }
}

TEST_F(JobTest, PluginConstructorFailureNamesPlugin) {
  JobSpec s = spec();
  s.emit.plugin = "file";  // missing path
  try {
    Job::start(s, broker_, cache_, options());
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlugin);
    EXPECT_NE(std::string(e.what()).find("'file'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("path"), std::string::npos);
  }
}

TEST_F(JobTest, TransientSinkFailuresAreRetried) {
  fill(20);
  sink_->transient_failures = 3;
  ASSERT_EQ(run(spec(), options()).state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot(), source_->records);
}

TEST_F(JobTest, RetryLimitSurfacesFailure) {
  fill(20);
  sink_->transient_failures = 1000;
  JobOptions o = options();
  o.retry.max_attempts = 3;
  JobOutcome out = run(spec(), o);
  EXPECT_EQ(out.state, JobState::kFailed);
  EXPECT_EQ(out.code, ErrorCode::kUnavailable);
  EXPECT_EQ(source_->committed.load(), 0u);
}

TEST_F(JobTest, CrashBeforeCommitRedeliversBatch) {
  fill(64);
  JobOptions o = options();
  int batches = 0;
  o.before_commit = [&](const std::string& id, const MetricsSnapshot&) {
    if (++batches == 2) throw InjectedCrash{id};
  };
  JobOutcome first = run(spec(), o);
  ASSERT_EQ(first.state, JobState::kFailed);
  EXPECT_TRUE(first.injected);
  EXPECT_EQ(source_->committed.load(), 16u);
  EXPECT_EQ(sink_->snapshot().size(), 32u);

  ASSERT_EQ(run(spec(), options()).state, JobState::kCompleted);
  auto got = sink_->snapshot();
  // Batch 2 (records 16..31) arrives twice; nothing is lost.
  ASSERT_EQ(got.size(), 64u + 16u);
  std::set<std::string> distinct;
  for (const auto& r : got) distinct.insert(r.payload);
  EXPECT_EQ(distinct.size(), 64u);
  EXPECT_EQ(got[32].payload, "r16");
}

TEST_F(JobTest, CrashRestartUpsertProjectionMatchesCleanRun) {
  for (int i = 0; i < 300; ++i) {
    source_->records.push_back(text_record("{\"n\":" + std::to_string(i) + "}", i,
                                           "k" + std::to_string(i % 97)));
  }
  auto upsert_spec = [&](const std::string& path) {
    JobSpec s = spec();
    s.emit.plugin = "keyed-upsert-store";
    s.emit.config.set("path", ConfigValue::string(path));
    return s;
  };
  std::string clean = (dir_ / "clean.db").string();
  ASSERT_EQ(run(upsert_spec(clean), options()).state, JobState::kCompleted);

  std::string crashy = (dir_ / "crashy.db").string();
  source_->committed = 0;
  for (int crash_at : {3, 7, 11}) {
    JobOptions o = options();
    int batches = 0;
    o.before_commit = [&, crash_at](const std::string& id, const MetricsSnapshot&) {
      if (++batches == crash_at) throw InjectedCrash{id};
    };
    run(upsert_spec(crashy), o);
  }
  ASSERT_EQ(run(upsert_spec(crashy), options()).state, JobState::kCompleted);
  EXPECT_EQ(KeyedStore::open(clean)->dump(), KeyedStore::open(crashy)->dump());
}

TEST_F(JobTest, StopFinishesInFlightAndCommits) {
  fill(1000);
  sink_->per_record_delay = Millis{1};
  JobSpec s = spec();
  auto job = Job::start(s, broker_, cache_, options());
  std::this_thread::sleep_for(Millis{100});
  job->request_stop();
  JobOutcome o = job->wait();
  EXPECT_EQ(o.state, JobState::kStopped);
  auto got = sink_->snapshot();
  EXPECT_LT(got.size(), 1000u);
  EXPECT_EQ(source_->committed.load(), got.size());

  ASSERT_EQ(run(spec(), options()).state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot(), source_->records);
}

TEST_F(JobTest, SlowSinkBoundsInFlightAndPausesIngest) {
  fill(600);
  sink_->per_record_delay = Millis{1};
  JobSpec s = spec();
  s.buffer_capacity = 40;
  s.batch_size = 8;
  ASSERT_EQ(run(s, options()).state, JobState::kCompleted);
  EXPECT_LE(last_metrics_.max_in_flight, 40u);
  EXPECT_GT(last_metrics_.ingest_pauses, 0u);
  EXPECT_EQ(sink_->snapshot().size(), 600u);
}

TEST_F(JobTest, MetricsFileHoldsCounters) {
  fill(30);
  JobOptions o = options();
  o.metrics_path = dir_ / "job.metrics";
  ASSERT_EQ(run(spec(), o).state, JobState::kCompleted);
  MetricsSnapshot m = read_metrics_file(o.metrics_path);
  EXPECT_EQ(m.records_in, 30u);
  EXPECT_EQ(m.records_out, 30u);
  EXPECT_EQ(m.records_in, m.records_out + m.dropped + m.dead_lettered);
  EXPECT_EQ(*m.last_committed_offset, 30u);
}

TEST_F(JobTest, FileSinkRoundTripsThroughFileSource) {
  fill(10);
  JobSpec s = spec();
  s.emit.plugin = "file";
  s.emit.config.set("path", ConfigValue::string((dir_ / "out.frames").string()));
  ASSERT_EQ(run(s, options()).state, JobState::kCompleted);

  JobSpec back = spec();
  back.job_id = "reader";
  back.ingest.plugin = "file";
  back.ingest.config.set("path", ConfigValue::string((dir_ / "out.frames").string()));
  ASSERT_EQ(run(back, options()).state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot(), source_->records);
}

TEST_F(JobTest, BrokerSinkThenBrokerSourceUntilEndOfStream) {
  fill(40);
  JobSpec s = spec();
  s.emit.plugin = "broker-topic";
  s.emit.config.set("topic", ConfigValue::string("t"));
  ASSERT_EQ(run(s, options()).state, JobState::kCompleted);
  auto fetched = broker_->fetch(TopicName("t"), 0, 1000);
  ASSERT_EQ(fetched.size(), 41u);
  for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(fetched[i].record, source_->records[i]);

  JobSpec c = spec();
  c.job_id = "consumer";
  c.consumer_group = "g";
  c.ingest.plugin = "broker-topic";
  c.ingest.config.set("topic", ConfigValue::string("t"));
  c.ingest.config.set("producers", ConfigValue::list({"job"}));
  ASSERT_EQ(run(c, options()).state, JobState::kCompleted);
  EXPECT_EQ(sink_->snapshot(), source_->records);
  EXPECT_EQ(broker_->read_committed("g", TopicName("t")), 41u);
}

}  // namespace
}  // namespace edna::runtime
