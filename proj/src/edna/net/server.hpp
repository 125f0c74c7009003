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

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "edna/broker/broker_api.hpp"
#include "edna/cache/state_cache.hpp"
#include "edna/common/file_util.hpp"

namespace edna::net {

// Serves the broker and cache opcodes over TCP, one thread per connection.
// Either backend may be null; its opcodes then answer kUnavailable.
class WireServer {
 public:
  WireServer(std::shared_ptr<broker::BrokerApi> broker, std::shared_ptr<cache::CacheApi> cache);
  ~WireServer();

  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  // Binds and starts accepting. Port 0 picks an ephemeral port.
  void start(const std::string& host, std::uint16_t port);
  void stop();

  std::uint16_t port() const noexcept { return port_; }
  std::string address() const;

  // Handles one request body; exposed for protocol tests.
  Bytes dispatch(std::string_view request);

 private:
  void accept_loop();
  void serve(int fd);

  std::shared_ptr<broker::BrokerApi> broker_;
  std::shared_ptr<cache::CacheApi> cache_;
  std::string host_;
  std::uint16_t port_ = 0;
  UniqueFd listen_fd_;
  UniqueFd wake_read_;
  UniqueFd wake_write_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  std::mutex conn_mu_;
  struct Connection {
    int fd;
    std::thread thread;
  };
  std::list<Connection> connections_;
};

}  // namespace edna::net
