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

#include <sys/socket.h>
#include <unistd.h>

#include "edna/broker/broker.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/common/error.hpp"
#include "edna/net/client.hpp"
#include "edna/net/server.hpp"
#include "edna/net/wire.hpp"
#include "temp_dir.hpp"

namespace edna::net {
namespace {

using edna::testing::TempDir;

StreamRecord rec(std::string payload) {
  StreamRecord r;
  r.payload = std::move(payload);
  r.source_id = "t";
  return r;
}

struct Served {
  TempDir dir;
  std::shared_ptr<broker::Broker> broker = broker::Broker::recover(dir.path());
  std::shared_ptr<cache::StateCache> cache = std::make_shared<cache::StateCache>();
  WireServer server{broker, cache};
  std::shared_ptr<WireClient> client;
  Served() {
    server.start("127.0.0.1", 0);
    client = std::make_shared<WireClient>(server.address());
  }
};

TEST(Wire, RemoteBrokerMatchesEmbeddedContract) {
  Served s;
  RemoteBroker rb(s.client);
  TopicName t("raw");
  rb.create_topic(t);
  rb.create_topic(t);
  std::vector<StreamRecord> batch = {rec("a"), rec(""), rec(std::string("\0\1", 2))};
  EXPECT_EQ(rb.append_batch(t, batch), 0u);
  EXPECT_EQ(rb.append(t, rec("d")), 3u);
  auto got = rb.fetch(t, 1, 2);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].offset, 1u);
  EXPECT_EQ(got[0].record, batch[1]);
  EXPECT_EQ(got[1].record, batch[2]);
  EXPECT_EQ(got, s.broker->fetch(t, 1, 2));
  EXPECT_TRUE(rb.fetch(t, 4, 10).empty());
  rb.commit_offset("g", t, 2);
  EXPECT_EQ(rb.read_committed("g", t), 2u);
  EXPECT_FALSE(rb.read_committed("h", t));
}

TEST(Wire, ErrorsCrossTheWireWithTheirCode) {
  Served s;
  RemoteBroker rb(s.client);
  auto code = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  EXPECT_EQ(code([&] { rb.fetch(TopicName("nope"), 0, 1); }), ErrorCode::kNotFound);
  rb.create_topic(TopicName("a"));
  EXPECT_EQ(code([&] { rb.fetch(TopicName("a"), 5, 1); }), ErrorCode::kOutOfRange);
  rb.append(TopicName("a"), rec("x"));
  rb.commit_offset("g", TopicName("a"), 1);
  EXPECT_EQ(code([&] { rb.commit_offset("g", TopicName("a"), 0); }), ErrorCode::kStaleCommit);
  // The connection survives an error response.
  EXPECT_EQ(rb.read_committed("g", TopicName("a")), 1u);
}

TEST(Wire, RemoteCacheVersions) {
  Served s;
  RemoteCache rc(s.client);
  EXPECT_FALSE(rc.get("k"));
  EXPECT_EQ(rc.put("k", "a"), 1u);
  EXPECT_EQ(rc.put("k", "b"), 2u);
  auto e = rc.get("k");
  ASSERT_TRUE(e);
  EXPECT_EQ(e->value, "b");
  EXPECT_EQ(e->version, 2u);
  EXPECT_FALSE(rc.get_if_newer("k", 2));
  EXPECT_EQ(rc.get_if_newer("k", 1)->version, 2u);
  EXPECT_FALSE(rc.get_if_newer("absent", 0));
  EXPECT_THROW(rc.put("", "x"), Error);
  EXPECT_EQ(s.cache->get("k")->value, "b");
}

TEST(Wire, DispatchUsesDocumentedOpcodes) {
  Served s;
  WireWriter create;
  create.u8(0x01).str8("t1");
  EXPECT_EQ(s.server.dispatch(create.bytes()), std::string(1, '\0'));
  WireWriter put;
  put.u8(0x10).str8("key").bytes32("val");
  Bytes resp = s.server.dispatch(put.bytes());
  WireReader r(resp);
  EXPECT_EQ(r.u8(), 0);
  EXPECT_EQ(r.u64(), 1u);
  // Unknown opcode: non-zero status.
  EXPECT_NE(s.server.dispatch(std::string(1, '\x7e'))[0], '\0');
  // Truncated request: protocol error status.
  EXPECT_EQ(static_cast<ErrorCode>(s.server.dispatch(std::string(1, '\x03'))[0]), ErrorCode::kProtocol);
}

TEST(Wire, MissingBackendAnswersUnavailable) {
  WireServer server(nullptr, std::make_shared<cache::StateCache>());
  WireWriter create;
  create.u8(0x01).str8("t1");
  EXPECT_EQ(static_cast<ErrorCode>(server.dispatch(create.bytes())[0]), ErrorCode::kUnavailable);
}

TEST(Wire, ClientReconnectsAfterServerRestart) {
  TempDir dir;
  auto b = broker::Broker::recover(dir.path());
  auto c = std::make_shared<cache::StateCache>();
  auto server = std::make_unique<WireServer>(b, c);
  server->start("127.0.0.1", 0);
  auto port = server->port();
  auto client = std::make_shared<WireClient>(server->address(), std::chrono::milliseconds(2000));
  RemoteCache rc(client);
  rc.put("k", "v");
  server->stop();
  server.reset();
  EXPECT_THROW(rc.get("k"), Error);
  server = std::make_unique<WireServer>(b, c);
  server->start("127.0.0.1", port);
  EXPECT_EQ(rc.get("k")->value, "v");
}

TEST(Wire, AddressParsing) {
  EXPECT_EQ(parse_address("127.0.0.1:80").port, 80);
  EXPECT_THROW(parse_address("nohost"), Error);
  EXPECT_THROW(parse_address("h:99999"), Error);
}

}  // namespace
}  // namespace edna::net
