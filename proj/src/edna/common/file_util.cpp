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

#include "edna/common/file_util.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>

#include "edna/common/error.hpp"

namespace edna {

void UniqueFd::reset(int fd) noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = fd;
}

UniqueFd open_file(const std::filesystem::path& path, int flags, int mode) {
  int fd = ::open(path.c_str(), flags | O_CLOEXEC, mode);
  if (fd < 0) raise_errno("open " + path.string());
  return UniqueFd(fd);
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("write");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void pwrite_all(int fd, std::string_view data, std::uint64_t offset) {
  while (!data.empty()) {
    ssize_t n = ::pwrite(fd, data.data(), data.size(), static_cast<off_t>(offset));
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("pwrite");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
    offset += static_cast<std::uint64_t>(n);
  }
}

Bytes pread_exact(int fd, std::uint64_t offset, std::size_t length) {
  Bytes out(length, '\0');
  std::size_t done = 0;
  while (done < length) {
    ssize_t n = ::pread(fd, out.data() + done, length - done, static_cast<off_t>(offset + done));
    if (n < 0) {
      if (errno == EINTR) continue;
      raise_errno("pread");
    }
    if (n == 0) raise(ErrorCode::kIo, "unexpected end of file");
    done += static_cast<std::size_t>(n);
  }
  return out;
}

std::uint64_t file_size(int fd) {
  struct stat st {};
  if (::fstat(fd, &st) != 0) raise_errno("fstat");
  return static_cast<std::uint64_t>(st.st_size);
}

Bytes read_file(const std::filesystem::path& path) {
  UniqueFd fd = open_file(path, O_RDONLY);
  std::uint64_t size = file_size(fd.get());
  return size == 0 ? Bytes{} : pread_exact(fd.get(), 0, static_cast<std::size_t>(size));
}

void atomic_write_file(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    UniqueFd fd = open_file(tmp, O_WRONLY | O_CREAT | O_TRUNC);
    write_all(fd.get(), data);
    if (::fdatasync(fd.get()) != 0) raise_errno("fdatasync " + tmp.string());
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) raise_errno("rename " + tmp.string());
  fsync_dir(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

void fsync_dir(const std::filesystem::path& dir) {
  UniqueFd fd = open_file(dir, O_RDONLY | O_DIRECTORY);
  if (::fsync(fd.get()) != 0) raise_errno("fsync " + dir.string());
}

}  // namespace edna
