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

#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <set>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/common/log.hpp"
#include "edna/net/wire.hpp"
#include "edna/runtime/checkpoint.hpp"
#include "edna/runtime/control.hpp"
#include "edna/runtime/keyed_store.hpp"
#include "edna/runtime/registry.hpp"

namespace edna::runtime {

std::uint64_t partition_hash(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// ---- ingest ----------------------------------------------------------------

// Reads a topic from the group's committed offset. With `producers` set, the
// stream ends once every listed producer has appended its end-of-stream
// marker and nothing is left to read. With `run` set, only markers carrying
// that run id count, so markers left by earlier runs are ignored.
class BrokerTopicIngest final : public IngestPlugin {
 public:
  explicit BrokerTopicIngest(const PluginContext& ctx)
      : broker_(ctx.broker),
        checkpoints_(ctx.checkpoints),
        topic_(ctx.cfg().require_string("topic")),
        group_(ctx.consumer_group.empty() ? ctx.job_id : ctx.consumer_group),
        eos_name_(ctx.job_id + ".eos"),
        run_(ctx.cfg().get_string("run", "")) {
    if (!broker_) raise(ErrorCode::kState, "no broker");
    for (auto& p : ctx.cfg().get_list("producers")) producers_.insert(p);
    std::string from = ctx.cfg().get_string("from", "committed");
    broker_->create_topic(topic_);
    if (from == "committed") {
      next_ = broker_->read_committed(group_, topic_).value_or(0);
    } else if (from != "earliest") {
      raise(ErrorCode::kValidation, "from must be committed or earliest");
    }
    if (checkpoints_) {
      for (auto& s : checkpoints_->load_lines(eos_name_)) seen_.insert(s);
    }
  }

  PollResult poll(std::size_t max) override {
    PollResult r;
    auto fetched = broker_->fetch(topic_, next_, max);
    bool seen_changed = false;
    for (auto& f : fetched) {
      next_ = f.offset + 1;
      if (is_end_of_stream(f.record)) {
        if (f.record.payload == run_ && producers_.count(f.record.source_id) &&
            seen_.insert(f.record.source_id).second) {
          seen_changed = true;
        }
        continue;
      }
      r.records.push_back(SourceRecord{std::move(f.record), f.offset});
    }
    if (seen_changed && checkpoints_) {
      checkpoints_->save_lines(eos_name_, std::vector<std::string>(seen_.begin(), seen_.end()));
    }
    r.cursor = next_;
    r.end_of_stream = fetched.empty() && !producers_.empty() &&
                      std::includes(seen_.begin(), seen_.end(), producers_.begin(), producers_.end());
    return r;
  }

  void commit(std::uint64_t next) override {
    try {
      broker_->commit_offset(group_, topic_, next);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kStaleCommit) throw;
    }
  }

  std::uint64_t start_position() const override { return next_; }

 private:
  std::shared_ptr<broker::BrokerApi> broker_;
  std::shared_ptr<CheckpointStore> checkpoints_;
  TopicName topic_;
  std::string group_;
  std::string eos_name_;
  std::string run_;
  std::set<std::string> producers_;
  std::set<std::string> seen_;
  std::uint64_t next_ = 0;
};

// Streams frames out of a file. Position = frame index; the committed index
// is checkpointed so a restart skips what was already emitted.
class FileIngest final : public IngestPlugin {
 public:
  explicit FileIngest(const PluginContext& ctx)
      : checkpoints_(ctx.checkpoints),
        path_(ctx.resolve(ctx.cfg().require_string("path")).string()),
        name_(ctx.job_id + ".ingest") {
    fd_ = open_file(path_, O_RDONLY | O_CLOEXEC);
    std::uint64_t start = 0;
    if (checkpoints_) start = checkpoints_->load_position(name_).value_or(0);
    while (index_ < start) {
      auto r = next_frame();
      if (!r) break;
    }
    start_ = index_;
  }

  PollResult poll(std::size_t max) override {
    PollResult r;
    while (r.records.size() < max) {
      auto rec = next_frame();
      if (!rec) {
        r.end_of_stream = true;
        break;
      }
      r.records.push_back(SourceRecord{std::move(*rec), index_ - 1});
    }
    r.cursor = index_;
    return r;
  }

  void commit(std::uint64_t next) override {
    if (checkpoints_) checkpoints_->save_position(name_, next);
  }

  std::uint64_t start_position() const override { return start_; }

 private:
  std::optional<StreamRecord> next_frame() {
    while (true) {
      std::string_view view(buf_);
      view.remove_prefix(pos_);
      if (!view.empty()) {
        try {
          DecodedFrame f = decode_frame(view);
          pos_ += f.size;
          ++index_;
          return std::move(f.record);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kIncompleteFrame) {
            raise(e.code(), path_ + ": frame " + std::to_string(index_) + ": " + e.what());
          }
        }
      }
      if (eof_) {
        if (!view.empty()) {
          log().warn("{}: ignoring {} trailing bytes (incomplete frame)", path_, view.size());
          pos_ = buf_.size();
        }
        return std::nullopt;
      }
      buf_.erase(0, pos_);
      pos_ = 0;
      std::size_t old = buf_.size();
      buf_.resize(old + (1u << 20));
      ssize_t n = ::read(fd_.get(), buf_.data() + old, 1u << 20);
      if (n < 0) raise_errno("read " + path_);
      buf_.resize(old + static_cast<std::size_t>(n));
      if (n == 0) eof_ = true;
    }
  }

  std::shared_ptr<CheckpointStore> checkpoints_;
  std::string path_;
  std::string name_;
  UniqueFd fd_;
  Bytes buf_;
  std::size_t pos_ = 0;
  bool eof_ = false;
  std::uint64_t index_ = 0;
  std::uint64_t start_ = 0;
};

// Connects to `address` and reads back-to-back frames until the peer closes.
class StreamSocketIngest final : public IngestPlugin {
 public:
  explicit StreamSocketIngest(const PluginContext& ctx)
      : address_(ctx.cfg().require_string("address")),
        timeout_(ctx.cfg().get_int("connect_timeout_ms", 5000)) {
    net::parse_address(address_);
  }

  PollResult poll(std::size_t max) override {
    if (!fd_ && !closed_) fd_ = net::connect_tcp(address_, timeout_);
    PollResult r;
    auto drain = [&] {
      while (r.records.size() < max) {
        std::string_view view(buf_);
        view.remove_prefix(pos_);
        if (view.empty()) return;
        try {
          DecodedFrame f = decode_frame(view);
          pos_ += f.size;
          r.records.push_back(SourceRecord{std::move(f.record), count_++});
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kIncompleteFrame) return;
          throw;
        }
      }
    };
    drain();
    if (r.records.empty() && !closed_) {
      pollfd p{fd_.get(), POLLIN, 0};
      if (::poll(&p, 1, 100) > 0) {
        buf_.erase(0, pos_);
        pos_ = 0;
        char chunk[65536];
        ssize_t n = ::read(fd_.get(), chunk, sizeof chunk);
        if (n < 0) raise_errno("read " + address_);
        if (n == 0) {
          closed_ = true;
          fd_.reset();
        } else {
          buf_.append(chunk, static_cast<std::size_t>(n));
        }
        drain();
      }
    }
    r.cursor = count_;
    r.end_of_stream = closed_ && pos_ == buf_.size();
    return r;
  }

  void commit(std::uint64_t) override {}

 private:
  std::string address_;
  Millis timeout_;
  UniqueFd fd_;
  Bytes buf_;
  std::size_t pos_ = 0;
  bool closed_ = false;
  std::uint64_t count_ = 0;
};

// ---- process -----------------------------------------------------------------

class IdentityMap final : public MapPlugin {
 public:
  StreamRecord apply(const StreamRecord& r) override { return r; }
};

class UppercaseMap final : public MapPlugin {
 public:
  StreamRecord apply(const StreamRecord& r) override {
    StreamRecord out = r;
    for (char& c : out.payload) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
  }
};

class KeyHashPartition final : public FilterPlugin {
 public:
  explicit KeyHashPartition(const PluginContext& ctx)
      : partitions_(ctx.cfg().get_uint("partitions", 1)), index_(ctx.cfg().get_uint("index", 0)) {
    if (partitions_ == 0 || index_ >= partitions_) {
      raise(ErrorCode::kValidation, "need 0 <= index < partitions");
    }
  }
  bool keep(const StreamRecord& r) override {
    return partition_hash(r.key ? std::string_view(*r.key) : std::string_view(r.payload)) %
               partitions_ == index_;
  }

 private:
  std::uint64_t partitions_;
  std::uint64_t index_;
};

class SchemaTagFilter final : public FilterPlugin {
 public:
  explicit SchemaTagFilter(const PluginContext& ctx) : invert_(ctx.cfg().get_bool("invert", false)) {
    for (auto& t : ctx.cfg().get_list("tag")) tags_.insert(t);
    if (tags_.empty()) raise(ErrorCode::kValidation, "missing config key 'tag'");
  }
  bool keep(const StreamRecord& r) override { return (tags_.count(r.schema_tag) != 0) != invert_; }

 private:
  std::set<std::string> tags_;
  bool invert_;
};

class SplitLines final : public FlatMapPlugin {
 public:
  void apply(const StreamRecord& r, std::vector<StreamRecord>& out) override {
    std::string_view p = r.payload;
    while (!p.empty()) {
      auto nl = p.find('\n');
      std::string_view line = p.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) {
        StreamRecord piece = r;
        piece.payload = std::string(line);
        out.push_back(std::move(piece));
      }
      if (nl == std::string_view::npos) break;
      p.remove_prefix(nl + 1);
    }
  }
};

// ---- emit --------------------------------------------------------------------

class BrokerTopicEmit final : public EmitPlugin {
 public:
  explicit BrokerTopicEmit(const PluginContext& ctx)
      : broker_(ctx.broker),
        topic_(ctx.cfg().require_string("topic")),
        job_id_(ctx.job_id),
        run_(ctx.cfg().get_string("run", "")) {
    if (!broker_) raise(ErrorCode::kState, "no broker");
    broker_->create_topic(topic_);
  }
  void push(std::span<const StreamRecord> records) override { broker_->append_batch(topic_, records); }
  void finish() override { broker_->append(topic_, make_end_of_stream(job_id_, run_)); }

 private:
  std::shared_ptr<broker::BrokerApi> broker_;
  TopicName topic_;
  std::string job_id_;
  std::string run_;
};

class FileEmit final : public EmitPlugin {
 public:
  explicit FileEmit(const PluginContext& ctx)
      : path_(ctx.resolve(ctx.cfg().require_string("path")).string()), sync_(ctx.cfg().get_bool("sync", true)) {
    std::filesystem::path p(path_);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    fd_ = open_file(p, O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC);
  }
  void push(std::span<const StreamRecord> records) override {
    Bytes buf;
    for (const auto& r : records) append_frame(buf, r);
    write_all(fd_.get(), buf);
    if (sync_ && ::fdatasync(fd_.get()) != 0) raise_errno("fdatasync " + path_);
  }

 private:
  std::string path_;
  bool sync_;
  UniqueFd fd_;
};

std::mutex& stdout_mutex() {
  static std::mutex mu;
  return mu;
}

// format=payload (default) prints one payload per line; format=frame writes
// raw frames.
class StdoutEmit final : public EmitPlugin {
 public:
  explicit StdoutEmit(const PluginContext& ctx) : format_(ctx.cfg().get_string("format", "payload")) {
    if (format_ != "payload" && format_ != "frame") {
      raise(ErrorCode::kValidation, "format must be payload or frame");
    }
  }
  void push(std::span<const StreamRecord> records) override {
    Bytes buf;
    for (const auto& r : records) {
      if (format_ == "frame") {
        append_frame(buf, r);
      } else {
        buf += r.payload;
        buf += '\n';
      }
    }
    std::lock_guard lock(stdout_mutex());
    if (std::fwrite(buf.data(), 1, buf.size(), stdout) != buf.size()) raise_errno("write stdout");
    std::fflush(stdout);
  }

 private:
  std::string format_;
};

// Upserts each record under its key. JSON-object payloads merge field by
// field; any other payload is stored as {"payload": "..."}.
class KeyedUpsertEmit final : public EmitPlugin {
 public:
  explicit KeyedUpsertEmit(const PluginContext& ctx)
      : store_(KeyedStore::open(ctx.resolve(ctx.cfg().require_string("path")))),
        collection_(ctx.cfg().get_string("collection", "records")) {}

  void push(std::span<const StreamRecord> records) override {
    std::vector<KeyedStore::Upsert> batch;
    batch.reserve(records.size());
    for (const auto& r : records) {
      if (!r.key) raise(ErrorCode::kValidation, "keyed-upsert-store: record without key");
      nlohmann::json doc = nlohmann::json::parse(r.payload, nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) doc = nlohmann::json{{"payload", r.payload}};
      batch.push_back(KeyedStore::Upsert{collection_, *r.key, std::move(doc)});
    }
    store_->upsert_batch(batch);
  }

 private:
  std::unique_ptr<KeyedStore> store_;
  std::string collection_;
};

template <typename T>
auto simple() {
  return [](const PluginContext&) { return std::make_unique<T>(); };
}

template <typename T>
auto with_ctx() {
  return [](const PluginContext& ctx) { return std::make_unique<T>(ctx); };
}

}  // namespace

void register_builtin_plugins(PluginRegistry& r) {
  r.add_ingest("broker-topic", with_ctx<BrokerTopicIngest>());
  r.add_ingest("file", with_ctx<FileIngest>());
  r.add_ingest("stream-socket", with_ctx<StreamSocketIngest>());
  r.add_map("identity", simple<IdentityMap>());
  r.add_map("uppercase", simple<UppercaseMap>());
  r.add_filter("key-hash-partition", with_ctx<KeyHashPartition>());
  r.add_filter("schema-tag", with_ctx<SchemaTagFilter>());
  r.add_flatmap("split-lines", simple<SplitLines>());
  r.add_emit("broker-topic", with_ctx<BrokerTopicEmit>());
  r.add_emit("file", with_ctx<FileEmit>());
  r.add_emit("stdout", with_ctx<StdoutEmit>());
  r.add_emit("keyed-upsert-store", with_ctx<KeyedUpsertEmit>());
}

}  // namespace edna::runtime
