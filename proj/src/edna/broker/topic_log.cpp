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

#include "edna/broker/topic_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "edna/common/error.hpp"
#include "edna/common/log.hpp"

namespace edna::broker {

namespace fs = std::filesystem;

std::string segment_file_name(Offset base) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%020llu.seg", static_cast<unsigned long long>(base));
  return buf;
}

namespace {

std::optional<Offset> parse_segment_name(const fs::path& path) {
  if (path.extension() != ".seg") return std::nullopt;
  std::string stem = path.stem().string();
  if (stem.empty()) return std::nullopt;
  Offset base = 0;
  auto res = std::from_chars(stem.data(), stem.data() + stem.size(), base);
  if (res.ec != std::errc{} || res.ptr != stem.data() + stem.size()) return std::nullopt;
  return base;
}

}  // namespace

TopicLog::TopicLog(fs::path dir, TopicName name, BrokerOptions options)
    : dir_(std::move(dir)), name_(std::move(name)), options_(options) {}

std::unique_ptr<TopicLog> TopicLog::create(const fs::path& dir, TopicName name,
                                           const BrokerOptions& options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(ErrorCode::kIo, "create " + dir.string() + ": " + ec.message());
  fsync_dir(dir.parent_path());
  return open(dir, std::move(name), options);
}

std::unique_ptr<TopicLog> TopicLog::open(const fs::path& dir, TopicName name,
                                         const BrokerOptions& options) {
  std::unique_ptr<TopicLog> log(new TopicLog(dir, std::move(name), options));

  std::vector<std::pair<Offset, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto base = parse_segment_name(entry.path())) files.emplace_back(*base, entry.path());
  }
  std::sort(files.begin(), files.end());

  if (files.empty()) {
    if (options.read_only) return log;
    Segment first;
    first.base = 0;
    first.path = dir / segment_file_name(0);
    first.fd = open_file(first.path, O_RDWR | O_CREAT);
    fsync_dir(dir);
    log->segments_.push_back(std::move(first));
    return log;
  }

  Offset expected = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    Segment segment;
    segment.base = files[i].first;
    segment.path = files[i].second;
    if (segment.base != expected) {
      raise(ErrorCode::kCorruptLog, "topic " + log->name_.str() + ": segment " +
                                        segment.path.filename().string() + " starts at offset " +
                                        std::to_string(segment.base) + ", expected " +
                                        std::to_string(expected));
    }
    segment.fd = open_file(segment.path, options.read_only ? O_RDONLY : O_RDWR);
    log->load_segment(segment, i + 1 == files.size());
    expected = segment.base + segment.positions.size();
    log->segments_.push_back(std::move(segment));
  }
  log->next_ = expected;
  return log;
}

void TopicLog::load_segment(Segment& segment, bool is_tail) {
  std::uint64_t size = file_size(segment.fd.get());
  Bytes data = size == 0 ? Bytes{} : pread_exact(segment.fd.get(), 0, static_cast<std::size_t>(size));
  std::string_view view(data);
  std::uint64_t pos = 0;
  while (pos < view.size()) {
    try {
      DecodedFrame frame = decode_frame(view.substr(pos));
      segment.positions.push_back(pos);
      pos += frame.size;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIncompleteFrame && is_tail) break;
      raise(ErrorCode::kCorruptLog, "topic " + name_.str() + ": " +
                                        segment.path.filename().string() + " at byte " +
                                        std::to_string(pos) + ": " + e.what());
    }
  }
  segment.bytes = pos;
  if (pos < view.size()) {
    std::uint64_t torn = view.size() - pos;
    if (options_.read_only) {
      log().info("topic {}: ignoring {} torn trailing bytes (read-only)", name_.str(), torn);
      return;
    }
    log().warn("topic {}: truncating {} bytes of torn trailing frame in {}", name_.str(), torn,
               segment.path.filename().string());
    if (::ftruncate(segment.fd.get(), static_cast<off_t>(pos)) != 0) {
      raise_errno("ftruncate " + segment.path.string());
    }
    if (::fdatasync(segment.fd.get()) != 0) raise_errno("fdatasync " + segment.path.string());
    truncated_bytes_ += torn;
  }
}

void TopicLog::roll_segment() {
  Segment& old_tail = segments_.back();
  if (::fdatasync(old_tail.fd.get()) != 0) raise_errno("fdatasync " + old_tail.path.string());
  Segment next;
  next.base = next_;
  next.path = dir_ / segment_file_name(next_);
  next.fd = open_file(next.path, O_RDWR | O_CREAT | O_EXCL);
  fsync_dir(dir_);
  std::unique_lock lock(mu_);
  segments_.push_back(std::move(next));
}

void TopicLog::write_chunk(Segment& tail, std::span<const StreamRecord> records) {
  Bytes buffer;
  std::vector<std::uint64_t> positions;
  positions.reserve(records.size());
  for (const StreamRecord& r : records) {
    positions.push_back(tail.bytes + buffer.size());
    append_frame(buffer, r);
  }
  try {
    pwrite_all(tail.fd.get(), buffer, tail.bytes);
    if (options_.flush == FlushPolicy::kEveryAppend && ::fdatasync(tail.fd.get()) != 0) {
      raise_errno("fdatasync " + tail.path.string());
    }
  } catch (...) {
    // Unacknowledged bytes must not survive into a later recovery.
    if (::ftruncate(tail.fd.get(), static_cast<off_t>(tail.bytes)) != 0) {
      log().error("topic {}: could not roll back failed append", name_.str());
    }
    throw;
  }
  std::unique_lock lock(mu_);
  tail.positions.insert(tail.positions.end(), positions.begin(), positions.end());
  tail.bytes += buffer.size();
  next_ += records.size();
}

Offset TopicLog::append(std::span<const StreamRecord> records) {
  if (options_.read_only) raise(ErrorCode::kState, "broker opened read-only");
  for (const StreamRecord& r : records) {
    std::size_t size = frame_size(r);
    if (size > kMaxFrameBytes) {
      raise(ErrorCode::kFrameTooLarge,
            "frame of " + std::to_string(size) + " bytes exceeds the 16 MiB cap");
    }
    validate_record(r);
  }
  std::lock_guard append_lock(append_mu_);
  Offset first = next_;
  std::size_t begin = 0;
  while (begin < records.size()) {
    Segment& tail = segments_.back();
    std::uint64_t projected = tail.bytes;
    std::size_t end = begin;
    while (end < records.size()) {
      std::uint64_t size = frame_size(records[end]);
      bool segment_has_data = projected > 0;
      if (segment_has_data && projected + size > options_.segment_bytes) break;
      projected += size;
      ++end;
    }
    if (end == begin) {
      roll_segment();
      continue;
    }
    write_chunk(tail, records.subspan(begin, end - begin));
    begin = end;
  }
  return first;
}

std::vector<FetchedRecord> TopicLog::fetch(Offset from, std::size_t max_records) const {
  struct Range {
    int fd;
    Offset first;
    std::uint64_t start;
    std::uint64_t end;
    std::vector<std::uint64_t> positions;
  };
  std::vector<Range> ranges;
  {
    std::shared_lock lock(mu_);
    if (from > next_) {
      raise(ErrorCode::kOutOfRange, "fetch offset " + std::to_string(from) +
                                        " beyond next offset " + std::to_string(next_) +
                                        " of topic " + name_.str());
    }
    std::size_t remaining = static_cast<std::size_t>(
        std::min<std::uint64_t>(max_records, next_ - from));
    auto it = std::upper_bound(segments_.begin(), segments_.end(), from,
                               [](Offset o, const Segment& s) { return o < s.base; });
    if (it != segments_.begin()) --it;
    Offset cursor = from;
    for (; it != segments_.end() && remaining > 0; ++it) {
      const Segment& s = *it;
      std::size_t first_index = static_cast<std::size_t>(cursor - s.base);
      if (first_index >= s.positions.size()) continue;
      std::size_t count = std::min(remaining, s.positions.size() - first_index);
      Range range;
      range.fd = s.fd.get();
      range.first = cursor;
      range.start = s.positions[first_index];
      range.end = first_index + count < s.positions.size() ? s.positions[first_index + count]
                                                           : s.bytes;
      range.positions.assign(s.positions.begin() + static_cast<std::ptrdiff_t>(first_index),
                             s.positions.begin() + static_cast<std::ptrdiff_t>(first_index + count));
      ranges.push_back(std::move(range));
      cursor += count;
      remaining -= count;
    }
  }

  std::vector<FetchedRecord> out;
  for (const Range& range : ranges) {
    Bytes data = pread_exact(range.fd, range.start, static_cast<std::size_t>(range.end - range.start));
    std::string_view view(data);
    for (std::size_t i = 0; i < range.positions.size(); ++i) {
      std::uint64_t rel = range.positions[i] - range.start;
      DecodedFrame frame = decode_frame(view.substr(static_cast<std::size_t>(rel)));
      out.push_back(FetchedRecord{range.first + i, std::move(frame.record)});
    }
  }
  return out;
}

Offset TopicLog::next_offset() const {
  std::shared_lock lock(mu_);
  return next_;
}

TopicInfo TopicLog::info() const {
  std::shared_lock lock(mu_);
  TopicInfo info;
  info.name = name_.str();
  info.next_offset = next_;
  info.segments = segments_.size();
  for (const Segment& s : segments_) info.bytes += s.bytes;
  return info;
}

void TopicLog::sync() {
  if (options_.read_only) return;
  int fd = -1;
  {
    std::shared_lock lock(mu_);
    if (segments_.empty()) return;
    fd = segments_.back().fd.get();
  }
  if (::fdatasync(fd) != 0) log().error("topic {}: fdatasync failed", name_.str());
}

}  // namespace edna::broker
