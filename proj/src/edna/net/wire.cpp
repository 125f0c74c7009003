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

#include "edna/net/wire.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>
#include <thread>
#include <charconv>

namespace edna::net {

WireWriter& WireWriter::str8(std::string_view s) {
  if (s.size() > 255) raise(ErrorCode::kValidation, "string field longer than 255 bytes");
  put_u8(buf_, static_cast<std::uint8_t>(s.size()));
  buf_.append(s);
  return *this;
}

WireWriter& WireWriter::bytes32(std::string_view b) {
  put_u32(buf_, static_cast<std::uint32_t>(b.size()));
  buf_.append(b);
  return *this;
}

void WireReader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) raise(ErrorCode::kProtocol, "message truncated");
}

std::uint8_t WireReader::u8() {
  need(1);
  return get_u8(data_, pos_++);
}

std::uint16_t WireReader::u16() {
  need(2);
  auto v = get_u16(data_, pos_);
  pos_ += 2;
  return v;
}

std::uint32_t WireReader::u32() {
  need(4);
  auto v = get_u32(data_, pos_);
  pos_ += 4;
  return v;
}

std::uint64_t WireReader::u64() {
  need(8);
  auto v = get_u64(data_, pos_);
  pos_ += 8;
  return v;
}

std::string WireReader::str8() {
  std::size_t len = u8();
  need(len);
  std::string s(data_.substr(pos_, len));
  pos_ += len;
  return s;
}

Bytes WireReader::bytes32() {
  std::size_t len = u32();
  need(len);
  Bytes b(data_.substr(pos_, len));
  pos_ += len;
  return b;
}

StreamRecord WireReader::frame() {
  DecodedFrame decoded = decode_frame(data_.substr(pos_));
  pos_ += decoded.size;
  return std::move(decoded.record);
}

void WireReader::expect_end() const {
  if (pos_ != data_.size()) raise(ErrorCode::kProtocol, "trailing bytes in message");
}

namespace {

// Returns bytes read; stops early only at EOF.
std::size_t read_fully(int fd, char* out, std::size_t length) {
  std::size_t done = 0;
  while (done < length) {
    ssize_t n = ::recv(fd, out + done, length - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(ErrorCode::kUnavailable, std::string("recv: ") + std::strerror(errno));
    }
    if (n == 0) break;
    done += static_cast<std::size_t>(n);
  }
  return done;
}

}  // namespace

void write_message(int fd, std::string_view body) {
  if (body.size() > kMaxMessageBytes) raise(ErrorCode::kProtocol, "message too large");
  Bytes out;
  out.reserve(4 + body.size());
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.append(body);
  std::string_view rest(out);
  while (!rest.empty()) {
    ssize_t n = ::send(fd, rest.data(), rest.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(ErrorCode::kUnavailable, std::string("send: ") + std::strerror(errno));
    }
    rest.remove_prefix(static_cast<std::size_t>(n));
  }
}

bool read_message(int fd, Bytes& body) {
  char header[4];
  std::size_t got = read_fully(fd, header, 4);
  if (got == 0) return false;
  if (got < 4) raise(ErrorCode::kUnavailable, "connection closed mid-message");
  std::uint32_t len = get_u32(std::string_view(header, 4), 0);
  if (len > kMaxMessageBytes) raise(ErrorCode::kProtocol, "message length exceeds limit");
  body.assign(len, '\0');
  if (read_fully(fd, body.data(), len) < len) {
    raise(ErrorCode::kUnavailable, "connection closed mid-message");
  }
  return true;
}

Bytes error_response(ErrorCode code, std::string_view message) {
  WireWriter w;
  std::string_view msg = message.substr(0, 0xffff);
  w.u8(static_cast<std::uint8_t>(code)).u16(static_cast<std::uint16_t>(msg.size()));
  Bytes out = w.take();
  out.append(msg);
  return out;
}

HostPort parse_address(std::string_view address) {
  std::size_t colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    raise(ErrorCode::kValidation, "address must be host:port, got '" + std::string(address) + "'");
  }
  HostPort hp;
  hp.host = std::string(address.substr(0, colon));
  std::string_view port = address.substr(colon + 1);
  unsigned value = 0;
  auto res = std::from_chars(port.data(), port.data() + port.size(), value);
  if (res.ec != std::errc{} || res.ptr != port.data() + port.size() || value > 65535) {
    raise(ErrorCode::kValidation, "invalid port in '" + std::string(address) + "'");
  }
  hp.port = static_cast<std::uint16_t>(value);
  return hp;
}

UniqueFd connect_tcp(std::string_view address, std::chrono::milliseconds timeout) {
  HostPort hp = parse_address(address);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string service = std::to_string(hp.port);
  if (int rc = ::getaddrinfo(hp.host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    raise(ErrorCode::kUnavailable, "resolve " + hp.host + ": " + ::gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);

  auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string last_error;
  do {
    UniqueFd fd(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, 0));
    if (!fd) raise_errno("socket");
    if (::connect(fd.get(), res->ai_addr, res->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return fd;
    }
    last_error = std::strerror(errno);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  } while (std::chrono::steady_clock::now() < deadline);
  raise(ErrorCode::kUnavailable, "connect " + std::string(address) + ": " + last_error);
}

}  // namespace edna::net
