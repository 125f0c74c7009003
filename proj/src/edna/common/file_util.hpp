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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "edna/common/bytes.hpp"

namespace edna {

// Owning POSIX file descriptor.
class UniqueFd {
 public:
  UniqueFd() = default;
  explicit UniqueFd(int fd) : fd_(fd) {}
  UniqueFd(UniqueFd&& other) noexcept : fd_(other.release()) {}
  UniqueFd& operator=(UniqueFd&& other) noexcept {
    if (this != &other) reset(other.release());
    return *this;
  }
  UniqueFd(const UniqueFd&) = delete;
  UniqueFd& operator=(const UniqueFd&) = delete;
  ~UniqueFd() { reset(); }

  int get() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }
  int release() noexcept {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) noexcept;

 private:
  int fd_ = -1;
};

UniqueFd open_file(const std::filesystem::path& path, int flags, int mode = 0644);

void write_all(int fd, std::string_view data);
void pwrite_all(int fd, std::string_view data, std::uint64_t offset);
Bytes pread_exact(int fd, std::uint64_t offset, std::size_t length);
std::uint64_t file_size(int fd);

Bytes read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, syncs it, renames over `path` and syncs the
// parent directory.
void atomic_write_file(const std::filesystem::path& path, std::string_view data);

void fsync_dir(const std::filesystem::path& dir);

}  // namespace edna
