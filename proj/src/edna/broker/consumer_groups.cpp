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

#include "edna/broker/consumer_groups.hpp"

#include <charconv>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"

namespace edna::broker {

namespace fs = std::filesystem;

ConsumerGroups::ConsumerGroups(fs::path dir, bool read_only)
    : dir_(std::move(dir)), read_only_(read_only) {
  if (!fs::exists(dir_)) return;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".offsets") continue;
    std::string group = entry.path().stem().string();
    Bytes text = read_file(entry.path());
    auto& offsets = groups_[group];
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string_view line(text.data() + start, end - start);
      start = end + 1;
      ++line_no;
      if (line.empty()) continue;
      std::size_t tab = line.find('\t');
      Offset value = 0;
      bool ok = tab != std::string_view::npos;
      if (ok) {
        auto res = std::from_chars(line.data() + tab + 1, line.data() + line.size(), value);
        ok = res.ec == std::errc{} && res.ptr == line.data() + line.size();
      }
      if (!ok) {
        raise(ErrorCode::kCorruptLog, "malformed line " + std::to_string(line_no) + " in " +
                                          entry.path().string());
      }
      offsets[std::string(line.substr(0, tab))] = value;
    }
  }
}

void ConsumerGroups::commit(const std::string& group, const std::string& topic, Offset next) {
  if (read_only_) raise(ErrorCode::kState, "broker opened read-only");
  std::lock_guard lock(mu_);
  auto& offsets = groups_[group];
  auto it = offsets.find(topic);
  if (it != offsets.end() && next < it->second) {
    raise(ErrorCode::kStaleCommit, "group " + group + " topic " + topic + ": commit " +
                                       std::to_string(next) + " is below committed " +
                                       std::to_string(it->second));
  }
  if (it != offsets.end() && next == it->second) return;
  Offset previous = it == offsets.end() ? 0 : it->second;
  bool existed = it != offsets.end();
  offsets[topic] = next;
  try {
    persist(group);
  } catch (...) {
    if (existed) {
      offsets[topic] = previous;
    } else {
      offsets.erase(topic);
    }
    throw;
  }
}

std::optional<Offset> ConsumerGroups::committed(const std::string& group,
                                                const std::string& topic) const {
  std::lock_guard lock(mu_);
  auto g = groups_.find(group);
  if (g == groups_.end()) return std::nullopt;
  auto t = g->second.find(topic);
  if (t == g->second.end()) return std::nullopt;
  return t->second;
}

std::vector<GroupOffset> ConsumerGroups::list() const {
  std::lock_guard lock(mu_);
  std::vector<GroupOffset> out;
  for (const auto& [group, offsets] : groups_) {
    for (const auto& [topic, next] : offsets) out.push_back({group, topic, next});
  }
  return out;
}

void ConsumerGroups::persist(const std::string& group) {
  std::string text;
  for (const auto& [topic, next] : groups_[group]) {
    text += topic;
    text += '\t';
    text += std::to_string(next);
    text += '\n';
  }
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) raise(ErrorCode::kIo, "create " + dir_.string() + ": " + ec.message());
  atomic_write_file(dir_ / (group + ".offsets"), text);
}

}  // namespace edna::broker
