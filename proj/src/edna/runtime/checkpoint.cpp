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

#include "edna/runtime/checkpoint.hpp"

#include <charconv>
#include <sstream>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/core/topic.hpp"

namespace fs = std::filesystem;

namespace edna::runtime {

CheckpointStore::CheckpointStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) raise(ErrorCode::kIo, "cannot create " + dir_.string() + ": " + ec.message());
}

fs::path CheckpointStore::path_for(const std::string& name) const {
  if (!is_valid_identifier(name)) raise(ErrorCode::kValidation, "bad checkpoint name '" + name + "'");
  return dir_ / name;
}

std::optional<std::uint64_t> CheckpointStore::load_position(const std::string& name) const {
  std::lock_guard lock(mu_);
  fs::path p = path_for(name);
  if (!fs::exists(p)) return std::nullopt;
  Bytes text = read_file(p);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    raise(ErrorCode::kCorruptLog, "checkpoint " + p.string() + " is not a number");
  }
  return v;
}

void CheckpointStore::save_position(const std::string& name, std::uint64_t value) {
  std::lock_guard lock(mu_);
  atomic_write_file(path_for(name), std::to_string(value) + "\n");
}

std::vector<std::string> CheckpointStore::load_lines(const std::string& name) const {
  std::lock_guard lock(mu_);
  fs::path p = path_for(name);
  std::vector<std::string> out;
  if (!fs::exists(p)) return out;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

void CheckpointStore::save_lines(const std::string& name, const std::vector<std::string>& lines) {
  std::lock_guard lock(mu_);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  atomic_write_file(path_for(name), text);
}

void CheckpointStore::remove(const std::string& name) {
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::remove(path_for(name), ec);
}

}  // namespace edna::runtime
