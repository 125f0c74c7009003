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

#include <map>
#include <random>

#include "edna/common/error.hpp"
#include "edna/runtime/retry.hpp"
#include "edna/runtime/window.hpp"
#include "runtime_fixtures.hpp"

namespace edna::runtime {
namespace {

using testing::text_record;

WindowSpec tumbling(std::int64_t width_ms, std::int64_t lateness_ms = 5000) {
  WindowSpec s;
  s.mode = WindowMode::kEventTimeTumbling;
  s.width = Millis{width_ms};
  s.allowed_lateness = Millis{lateness_ms};
  return s;
}

std::vector<WindowBatch> decode_all(const WindowOperator::Output& out) {
  std::vector<WindowBatch> v;
  for (const auto& b : out.batches) v.push_back(decode_window_batch(b.record));
  return v;
}

TEST(WindowOperator, BoundaryAssignmentIsHalfOpen) {
  WindowOperator op(tumbling(60'000), "w");
  WindowOperator::Output out;
  std::uint64_t pos = 0;
  for (std::int64_t t : {0, 59'999, 60'000}) op.add({text_record("x", t), pos++, 1}, out);
  op.flush(out);
  auto b = decode_all(out);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].records.size(), 2u);
  EXPECT_EQ(to_millis(b[0].start), 0);
  EXPECT_EQ(to_millis(b[0].end), 60'000);
  EXPECT_EQ(b[1].records.size(), 1u);
  EXPECT_EQ(to_millis(b[1].start), 60'000);
}

TEST(WindowOperator, CountModeFlushesRemainder) {
  WindowSpec s;
  s.mode = WindowMode::kCount;
  s.count = 3;
  WindowOperator op(s, "w");
  WindowOperator::Output out;
  for (std::uint64_t i = 0; i < 10; ++i) op.add({text_record("x", static_cast<std::int64_t>(i)), i, 1}, out);
  op.flush(out);
  std::vector<std::size_t> sizes;
  for (const auto& b : decode_all(out)) sizes.push_back(b.records.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 3, 1}));
}

TEST(WindowOperator, ClosesWhenWatermarkPassesEndPlusLateness) {
  WindowOperator op(tumbling(1000, 500), "w");
  WindowOperator::Output out;
  op.add({text_record("a", 100), 0, 1}, out);
  op.add({text_record("b", 1499), 1, 1}, out);
  EXPECT_TRUE(out.batches.empty());
  EXPECT_EQ(op.min_held_position(), 0u);
  op.add({text_record("c", 1500), 2, 1}, out);
  ASSERT_EQ(out.batches.size(), 1u);
  EXPECT_EQ(decode_all(out)[0].records.size(), 1u);
  EXPECT_EQ(op.min_held_position(), 1u);
  EXPECT_EQ(op.held(), 2u);
}

TEST(WindowOperator, LateRecordsAreSeparated) {
  WindowOperator op(tumbling(1000, 0), "w");
  WindowOperator::Output out;
  op.add({text_record("a", 100), 0, 1}, out);
  op.add({text_record("b", 2500), 1, 1}, out);
  op.add({text_record("late", 999), 2, 1}, out);
  ASSERT_EQ(out.late.size(), 1u);
  EXPECT_EQ(out.late[0].record.payload, "late");
  // Inside lateness: window 2000 is still open.
  op.add({text_record("ok", 2001), 3, 1}, out);
  EXPECT_EQ(out.late.size(), 1u);
}

TEST(WindowOperator, DedupByKeyWithinWindow) {
  WindowSpec s = tumbling(1000);
  s.dedup_by_key = true;
  WindowOperator op(s, "w");
  WindowOperator::Output out;
  op.add({text_record("a", 1, "k"), 0, 1}, out);
  op.add({text_record("a", 2, "k"), 1, 1}, out);
  op.add({text_record("b", 3, "j"), 2, 1}, out);
  op.add({text_record("a", 1001, "k"), 3, 1}, out);
  op.flush(out);
  auto b = decode_all(out);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].records.size(), 2u);
  EXPECT_EQ(b[1].records.size(), 1u);
  EXPECT_EQ(out.deduped_weight, 1u);
}

TEST(WindowOperator, NegativeTimesFloorCorrectly) {
  EXPECT_EQ(window_start_ms(-1, 60'000), -60'000);
  EXPECT_EQ(window_start_ms(-60'000, 60'000), -60'000);
  EXPECT_EQ(window_start_ms(59'999, 60'000), 0);
}

// Membership against a brute-force bucket sort over sorted-ish random input
// where lateness covers the whole hour, so nothing is late.
TEST(WindowOperator, MembershipMatchesBucketSort) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> t(0, 3'600'000 - 1);
  WindowOperator op(tumbling(60'000, 3'600'000), "w");
  WindowOperator::Output out;
  std::map<std::int64_t, std::multiset<std::string>> oracle;
  for (std::uint64_t i = 0; i < 10'000; ++i) {
    std::int64_t ts = t(rng);
    std::string p = std::to_string(i);
    oracle[(ts / 60'000) * 60'000].insert(p);
    op.add({text_record(p, ts), i, 1}, out);
  }
  op.flush(out);
  std::map<std::int64_t, std::multiset<std::string>> got;
  std::int64_t prev = INT64_MIN;
  for (const auto& b : decode_all(out)) {
    EXPECT_GT(to_millis(b.start), prev);
    prev = to_millis(b.start);
    for (const auto& r : b.records) got[to_millis(b.start)].insert(r.payload);
  }
  EXPECT_EQ(got, oracle);
}

TEST(WindowBatchCodec, RoundTripAndRejectsGarbage) {
  WindowBatch b{from_millis(60'000), from_millis(120'000), {text_record("a", 1), text_record("", 2, "k")}};
  StreamRecord r = encode_window_batch(b, "src");
  EXPECT_EQ(decode_window_batch(r), b);
  r.payload.pop_back();
  EXPECT_THROW(decode_window_batch(r), Error);
  EXPECT_THROW(decode_window_batch(text_record("x")), Error);
}

TEST(Backoff, ExponentialWithCapAndJitterBounds) {
  RetryPolicy p;
  p.jitter = 0;
  EXPECT_EQ(backoff_delay(p, 1).count(), 100);
  EXPECT_EQ(backoff_delay(p, 2).count(), 200);
  EXPECT_EQ(backoff_delay(p, 5).count(), 1600);
  EXPECT_EQ(backoff_delay(p, 40).count(), 30'000);
  p.jitter = 0.2;
  for (int i = 0; i < 200; ++i) {
    auto d = backoff_delay(p, 3).count();
    EXPECT_GE(d, 320);
    EXPECT_LE(d, 480);
    EXPECT_LE(backoff_delay(p, 30).count(), 30'000);
  }
}

TEST(Backoff, NonRetryableErrorsPropagateImmediately) {
  RetryPolicy p;
  int calls = 0;
  EXPECT_THROW(retry_call(p, "x", [&] {
    ++calls;
    raise(ErrorCode::kValidation, "no");
  }),
               Error);
  EXPECT_EQ(calls, 1);
}

TEST(Backoff, StopInterruptsRetry) {
  RetryPolicy p;
  p.base = Millis{10'000};
  auto start = std::chrono::steady_clock::now();
  try {
    retry_call(p, "x", [] { raise(ErrorCode::kUnavailable, "down"); }, [] { return true; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kState);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(2));
}

}  // namespace
}  // namespace edna::runtime
