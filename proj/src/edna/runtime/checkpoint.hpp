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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace edna::runtime {

// Small named values that must survive restarts (source positions of
// non-broker ingests, end-of-stream markers seen). Every save is atomic.
class CheckpointStore {
 public:
  explicit CheckpointStore(std::filesystem::path dir);

  std::optional<std::uint64_t> load_position(const std::string& name) const;
  void save_position(const std::string& name, std::uint64_t value);

  std::vector<std::string> load_lines(const std::string& name) const;
  void save_lines(const std::string& name, const std::vector<std::string>& lines);

  void remove(const std::string& name);

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& name) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace edna::runtime
