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

#include "edna/runtime/window.hpp"

#include "edna/common/bytes.hpp"
#include "edna/common/error.hpp"

namespace edna::runtime {

std::int64_t window_start_ms(std::int64_t t, std::int64_t width) noexcept {
  std::int64_t q = t / width;
  if (t % width != 0 && t < 0) --q;
  return q * width;
}

StreamRecord encode_window_batch(const WindowBatch& batch, std::string_view source_id) {
  StreamRecord r;
  r.schema_tag = std::string(kWindowBatchTag);
  r.source_id = std::string(source_id);
  r.event_time = batch.start;
  put_u64(r.payload, static_cast<std::uint64_t>(to_millis(batch.start)));
  put_u64(r.payload, static_cast<std::uint64_t>(to_millis(batch.end)));
  put_u32(r.payload, static_cast<std::uint32_t>(batch.records.size()));
  for (const auto& rec : batch.records) append_frame(r.payload, rec);
  return r;
}

bool is_window_batch(const StreamRecord& record) noexcept {
  return record.schema_tag == kWindowBatchTag;
}

WindowBatch decode_window_batch(const StreamRecord& record) {
  if (!is_window_batch(record)) {
    raise(ErrorCode::kCorruptFrame, "record is not a window batch (tag '" + record.schema_tag + "')");
  }
  std::string_view p = record.payload;
  if (p.size() < 20) raise(ErrorCode::kCorruptFrame, "window batch header truncated");
  WindowBatch b;
  b.start = from_millis(static_cast<std::int64_t>(get_u64(p, 0)));
  b.end = from_millis(static_cast<std::int64_t>(get_u64(p, 8)));
  std::uint32_t n = get_u32(p, 16);
  p.remove_prefix(20);
  b.records.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    DecodedFrame f;
    try {
      f = decode_frame(p);
    } catch (const Error& e) {
      raise(ErrorCode::kCorruptFrame, std::string("window batch member: ") + e.what());
    }
    b.records.push_back(std::move(f.record));
    p.remove_prefix(f.size);
  }
  if (!p.empty()) raise(ErrorCode::kCorruptFrame, "trailing bytes after window batch");
  return b;
}

WindowOperator::WindowOperator(WindowSpec spec, std::string source_id)
    : spec_(spec), source_id_(std::move(source_id)) {}

void WindowOperator::close(std::map<std::int64_t, Open>::iterator it, Output& out) {
  WindowBatch batch;
  TrackedRecord tr;
  tr.weight = 0;
  std::int64_t start = it->first;
  if (spec_.mode == WindowMode::kEventTimeTumbling) {
    batch.start = from_millis(start);
    batch.end = from_millis(start + spec_.width.count());
  } else {
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& i : it->second.items) {
      lo = std::min(lo, to_millis(i.record.event_time));
      hi = std::max(hi, to_millis(i.record.event_time));
    }
    batch.start = from_millis(lo);
    batch.end = from_millis(hi + 1);
  }
  bool first = true;
  for (auto& i : it->second.items) {
    tr.weight += i.weight;
    tr.position = first ? i.position : std::min(tr.position, i.position);
    first = false;
    positions_.erase(positions_.find(i.position));
    --held_;
    batch.records.push_back(std::move(i.record));
  }
  tr.record = encode_window_batch(batch, source_id_);
  out.batches.push_back(std::move(tr));
  open_.erase(it);
}

void WindowOperator::add(TrackedRecord item, Output& out) {
  std::int64_t t = to_millis(item.record.event_time);
  if (spec_.mode == WindowMode::kCount) {
    // Count windows use a single open slot keyed 0.
    Open& w = open_[0];
    positions_.insert(item.position);
    ++held_;
    w.items.push_back(std::move(item));
    if (w.items.size() >= spec_.count) close(open_.begin(), out);
    return;
  }

  const std::int64_t width = spec_.width.count();
  const std::int64_t lateness = spec_.allowed_lateness.count();
  std::int64_t start = window_start_ms(t, width);
  if (watermark_ && start + width + lateness <= *watermark_) {
    out.late.push_back(std::move(item));
    return;
  }
  Open& w = open_[start];
  bool keep = true;
  if (spec_.dedup_by_key && item.record.key) {
    keep = w.keys.insert(*item.record.key).second;
  }
  if (keep) {
    positions_.insert(item.position);
    ++held_;
    w.items.push_back(std::move(item));
  } else {
    out.deduped_weight += item.weight;
    if (w.items.empty()) open_.erase(start);
  }
  if (!watermark_ || t > *watermark_) watermark_ = t;
  while (!open_.empty() && open_.begin()->first + width + lateness <= *watermark_) {
    close(open_.begin(), out);
  }
}

void WindowOperator::flush(Output& out) {
  while (!open_.empty()) close(open_.begin(), out);
}

std::optional<std::uint64_t> WindowOperator::min_held_position() const {
  if (positions_.empty()) return std::nullopt;
  return *positions_.begin();
}

}  // namespace edna::runtime
