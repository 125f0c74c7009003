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

#include "edna/net/server.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "edna/common/log.hpp"
#include "edna/net/wire.hpp"

namespace edna::net {

WireServer::WireServer(std::shared_ptr<broker::BrokerApi> broker,
                       std::shared_ptr<cache::CacheApi> cache)
    : broker_(std::move(broker)), cache_(std::move(cache)) {}

WireServer::~WireServer() { stop(); }

void WireServer::start(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    raise(ErrorCode::kValidation, "resolve " + host + ": " + ::gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);

  UniqueFd fd(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, 0));
  if (!fd) raise_errno("socket");
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd.get(), res->ai_addr, res->ai_addrlen) != 0) raise_errno("bind " + host);
  if (::listen(fd.get(), 64) != 0) raise_errno("listen");
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  host_ = host;
  listen_fd_ = std::move(fd);

  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC) != 0) raise_errno("pipe");
  wake_read_.reset(pipe_fds[0]);
  wake_write_.reset(pipe_fds[1]);

  acceptor_ = std::thread([this] { accept_loop(); });
  log().info("wire server listening on {}", address());
}

std::string WireServer::address() const { return host_ + ":" + std::to_string(port_); }

void WireServer::stop() {
  if (stopping_.exchange(true)) return;
  if (wake_write_) {
    char c = 0;
    [[maybe_unused]] auto n = ::write(wake_write_.get(), &c, 1);
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::list<Connection> conns;
  {
    std::lock_guard lock(conn_mu_);
    for (auto& c : connections_) ::shutdown(c.fd, SHUT_RDWR);
    conns.swap(connections_);
  }
  for (auto& c : conns) {
    if (c.thread.joinable()) c.thread.join();
  }
}

void WireServer::accept_loop() {
  while (!stopping_) {
    pollfd fds[2] = {{listen_fd_.get(), POLLIN, 0}, {wake_read_.get(), POLLIN, 0}};
    int rc = ::poll(fds, 2, -1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      log().error("wire server poll: {}", std::strerror(errno));
      return;
    }
    if (fds[1].revents != 0) return;
    if ((fds[0].revents & POLLIN) == 0) continue;
    int client = ::accept4(listen_fd_.get(), nullptr, nullptr, SOCK_CLOEXEC);
    if (client < 0) continue;
    int one = 1;
    ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(conn_mu_);
    if (stopping_) {
      ::close(client);
      return;
    }
    connections_.push_back(Connection{client, {}});
    connections_.back().thread = std::thread([this, client] { serve(client); });
  }
}

void WireServer::serve(int fd) {
  UniqueFd owned(fd);
  Bytes request;
  try {
    while (!stopping_ && read_message(fd, request)) {
      write_message(fd, dispatch(request));
    }
  } catch (const std::exception& e) {
    log().debug("wire connection closed: {}", e.what());
  }
  // The fd stays registered until stop(); mark it so shutdown() is harmless.
  std::lock_guard lock(conn_mu_);
  for (auto& c : connections_) {
    if (c.fd == fd) c.fd = -1;
  }
}

Bytes WireServer::dispatch(std::string_view request) {
  try {
    WireReader in(request);
    auto op = static_cast<Opcode>(in.u8());
    WireWriter out;
    out.u8(0);
    switch (op) {
      case Opcode::kCreate:
      case Opcode::kAppend:
      case Opcode::kFetch:
      case Opcode::kCommit:
      case Opcode::kReadCommitted:
        if (!broker_) raise(ErrorCode::kUnavailable, "no broker served on this endpoint");
        break;
      case Opcode::kPut:
      case Opcode::kGet:
      case Opcode::kGetIfNewer:
        if (!cache_) raise(ErrorCode::kUnavailable, "no cache served on this endpoint");
        break;
      default:
        raise(ErrorCode::kProtocol,
              "unknown opcode " + std::to_string(static_cast<unsigned>(op)));
    }
    switch (op) {
      case Opcode::kCreate: {
        TopicName topic(in.str8());
        in.expect_end();
        broker_->create_topic(topic);
        break;
      }
      case Opcode::kAppend: {
        TopicName topic(in.str8());
        std::uint32_t count = in.u32();
        std::vector<StreamRecord> records;
        records.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) records.push_back(in.frame());
        in.expect_end();
        out.u64(broker_->append_batch(topic, records));
        break;
      }
      case Opcode::kFetch: {
        TopicName topic(in.str8());
        Offset from = in.u64();
        std::uint32_t max = in.u32();
        in.expect_end();
        auto records = broker_->fetch(topic, from, max);
        WireWriter body;
        std::uint32_t n = 0;
        for (const auto& r : records) {
          if (n > 0 && body.bytes().size() + frame_size(r.record) > kFetchResponseBudget) break;
          body.u64(r.offset).frame(r.record);
          ++n;
        }
        out.u32(n);
        Bytes head = out.take();
        head += body.bytes();
        return head;
      }
      case Opcode::kCommit: {
        std::string group = in.str8();
        TopicName topic(in.str8());
        Offset next = in.u64();
        in.expect_end();
        broker_->commit_offset(group, topic, next);
        break;
      }
      case Opcode::kReadCommitted: {
        std::string group = in.str8();
        TopicName topic(in.str8());
        in.expect_end();
        auto committed = broker_->read_committed(group, topic);
        out.u8(committed ? 1 : 0).u64(committed.value_or(0));
        break;
      }
      case Opcode::kPut: {
        std::string key = in.str8();
        Bytes value = in.bytes32();
        in.expect_end();
        out.u64(cache_->put(key, value));
        break;
      }
      case Opcode::kGet:
      case Opcode::kGetIfNewer: {
        std::string key = in.str8();
        std::optional<cache::CacheEntry> entry;
        if (op == Opcode::kGet) {
          in.expect_end();
          entry = cache_->get(key);
        } else {
          std::uint64_t than = in.u64();
          in.expect_end();
          entry = cache_->get_if_newer(key, than);
        }
        out.u8(entry ? 1 : 0);
        if (entry) {
          out.u64(entry->version)
              .u64(static_cast<std::uint64_t>(to_millis(entry->updated_at)))
              .bytes32(entry->value);
        }
        break;
      }
    }
    return out.take();
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::kInternal, e.what());
  }
}

}  // namespace edna::net
