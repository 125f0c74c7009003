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

#include "edna/covid/plugins.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/common/log.hpp"
#include "edna/covid/article.hpp"
#include "edna/covid/cleaning.hpp"
#include "edna/covid/generator.hpp"
#include "edna/covid/keywords.hpp"
#include "edna/covid/sentiment.hpp"
#include "edna/covid/store.hpp"
#include "edna/covid/window_stats.hpp"
#include "edna/runtime/checkpoint.hpp"
#include "edna/runtime/window.hpp"

namespace edna::covid {
namespace {

using runtime::PluginContext;
using runtime::PollResult;
using runtime::SourceRecord;
using Clock = std::chrono::steady_clock;

KeywordSet load_keyword_files(const PluginContext& ctx, const std::string& key, const std::string& set_id) {
  KeywordSet set;
  set.set_id = set_id;
  for (const auto& p : ctx.cfg().get_list(key)) {
    for (const auto& e : parse_keyword_lines(read_file(ctx.resolve(p)), set_id).entries) {
      set.add(e.keyword, e.lang);
    }
  }
  return set;
}

std::shared_ptr<runtime::KeyedStore> open_store(const PluginContext& ctx, const std::string& key) {
  auto path = ctx.resolve(ctx.cfg().require_string(key));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  return runtime::KeyedStore::open(path);
}

// Enrichment record: {"tweet": {original fields}, "enrichments": {...}}.
StreamRecord enrichment_record(const Tweet& t, nlohmann::json enrichments, const std::string& source) {
  StreamRecord r;
  r.payload = nlohmann::json{{"tweet", tweet_document(t)}, {"enrichments", std::move(enrichments)}}.dump();
  r.event_time = t.created_at;
  r.key = std::to_string(t.tweet_id);
  r.source_id = source;
  r.schema_tag = std::string(kEnrichmentTag);
  return r;
}

Tweet require_tweet(const StreamRecord& record) {
  ParsedTweet p = parse_tweet(record.payload);
  if (!p.tweet) raise(ErrorCode::kParse, "not a tweet (" + std::string(discard_name(p.reason)) + ")");
  return std::move(*p.tweet);
}

// ---- ingest ----------------------------------------------------------------

// Deterministic synthetic tweets. Position = record index; commits are
// checkpointed so a restart resumes after the last emitted record.
class GeneratorIngest final : public runtime::IngestPlugin {
 public:
  explicit GeneratorIngest(const PluginContext& ctx)
      : checkpoints_(ctx.checkpoints), name_(ctx.job_id + ".ingest") {
    DriftProfile profile = load_drift_profile(ctx.resolve(ctx.cfg().require_string("profile")));
    if (ctx.cfg().contains("seed")) profile.seed = ctx.cfg().get_uint("seed", 0);
    budget_ = ctx.cfg().get_uint("budget", 10000);
    gen_ = std::make_unique<TweetGenerator>(std::move(profile), ctx.cfg().get_string("source", ctx.job_id));
    if (checkpoints_) next_ = checkpoints_->load_position(name_).value_or(0);
    start_ = next_;
  }

  PollResult poll(std::size_t max) override {
    PollResult r;
    while (r.records.size() < max && next_ < budget_) {
      r.records.push_back(SourceRecord{gen_->record(next_), next_});
      ++next_;
    }
    r.cursor = next_;
    r.end_of_stream = next_ >= budget_;
    return r;
  }

  void commit(std::uint64_t next) override {
    if (checkpoints_) checkpoints_->save_position(name_, next);
  }

  std::uint64_t start_position() const override { return start_; }

 private:
  std::shared_ptr<runtime::CheckpointStore> checkpoints_;
  std::string name_;
  std::unique_ptr<TweetGenerator> gen_;
  std::uint64_t budget_ = 0;
  std::uint64_t next_ = 0;
  std::uint64_t start_ = 0;
};

Bytes fetch_url(const std::string& url) {
  if (url.rfind("https://", 0) == 0) raise(ErrorCode::kValidation, "https sources are not supported: " + url);
  auto slash = url.find('/', 7);
  std::string host = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);
  httplib::Client client(host);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(10, 0);
  auto res = client.Get(path);
  if (!res) raise(ErrorCode::kUnavailable, "fetch " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    raise(ErrorCode::kUnavailable, "fetch " + url + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

// Misinformation keyword sources. The static list is read once; the article
// (a file or an http:// URL) is re-read every interval_ms, `polls` times
// (0 = forever). Nothing is checkpointed: the cache it feeds is rebuilt on
// every start.
class KeywordSourceIngest final : public runtime::IngestPlugin {
 public:
  explicit KeywordSourceIngest(const PluginContext& ctx)
      : job_id_(ctx.job_id),
        source_(ctx.cfg().get_string("source", "wikipedia")),
        article_(ctx.cfg().get_string("article", "")),
        polls_(ctx.cfg().get_uint("polls", 1)),
        interval_(ctx.cfg().get_uint("interval_ms", 86'400'000)) {
    if (auto s = ctx.cfg().get_string("static", ""); !s.empty()) static_path_ = ctx.resolve(s);
    if (!article_.empty() && article_.rfind("http://", 0) != 0) {
      if (article_.rfind("https://", 0) == 0) raise(ErrorCode::kValidation, "https sources are not supported");
      article_ = ctx.resolve(article_).string();
    }
    if (static_path_.empty() && article_.empty()) {
      raise(ErrorCode::kValidation, "keyword-source needs 'static' or 'article'");
    }
  }

  PollResult poll(std::size_t max) override {
    PollResult r;
    if (!static_done_ && !static_path_.empty()) {
      r.records.push_back(SourceRecord{make(kKeywordListTag, "static", read_file(static_path_)), pos_++});
    }
    static_done_ = true;
    bool more_polls = !article_.empty() && (polls_ == 0 || done_polls_ < polls_);
    if (more_polls && r.records.size() < max && Clock::now() >= next_poll_) {
      Bytes text = article_.rfind("http://", 0) == 0 ? fetch_url(article_) : read_file(article_);
      r.records.push_back(SourceRecord{make(kArticleTag, source_, std::move(text)), pos_++});
      ++done_polls_;
      next_poll_ = Clock::now() + std::chrono::milliseconds(interval_);
      more_polls = polls_ == 0 || done_polls_ < polls_;
    }
    r.cursor = pos_;
    r.end_of_stream = !more_polls && r.records.empty();
    return r;
  }

  void commit(std::uint64_t) override {}

 private:
  StreamRecord make(std::string_view tag, const std::string& key, Bytes payload) const {
    StreamRecord rec;
    rec.payload = std::move(payload);
    rec.event_time = now_utc();
    rec.key = key;
    rec.source_id = job_id_;
    rec.schema_tag = std::string(tag);
    return rec;
  }

  std::string job_id_;
  std::string source_;
  std::string article_;
  std::filesystem::path static_path_;
  std::uint64_t polls_;
  std::uint64_t interval_;
  bool static_done_ = false;
  std::uint64_t done_polls_ = 0;
  Clock::time_point next_poll_{};
  std::uint64_t pos_ = 0;
};

// ---- process ---------------------------------------------------------------

// Cleaning + relevance. Passes the original tweet record on; discards are
// counted per reason in the job metrics. With a store configured, kept ids
// are recorded there so retweets can be judged by their parent.
class ExtractMetadata final : public runtime::FlatMapPlugin {
 public:
  explicit ExtractMetadata(const PluginContext& ctx) : count_(ctx.count) {
    if (ctx.cfg().contains("store")) store_ = open_store(ctx, "store");
    KeywordSet set = load_keyword_files(ctx, "keywords", "relevance");
    if (set.entries.empty()) raise(ErrorCode::kValidation, "extract-metadata: no relevance keywords");
    auto store = store_;
    filter_ = std::make_unique<RelevanceFilter>(
        KeywordMatcher(set.keywords()), [store](std::uint64_t id) -> std::optional<bool> {
          if (!store) return std::nullopt;
          return lookup_verdict(*store, id);
        });
  }

  void apply(const StreamRecord& record, std::vector<StreamRecord>& out) override {
    MetadataResult m = extract_metadata(record, *filter_);
    if (!m.tweet) {
      count_(std::string("discarded_") + std::string(discard_name(m.reason)), 1);
      return;
    }
    if (store_) record_verdict(*store_, m.tweet->tweet_id, true);
    count_("passed", 1);
    StreamRecord r = record;
    r.event_time = m.tweet->created_at;
    r.key = std::to_string(m.tweet->tweet_id);
    r.schema_tag = std::string(kTweetJsonTag);
    out.push_back(std::move(r));
  }

 private:
  std::function<void(std::string_view, std::uint64_t)> count_;
  std::shared_ptr<runtime::KeyedStore> store_;
  std::unique_ptr<RelevanceFilter> filter_;
};

class SentimentMap final : public runtime::MapPlugin {
 public:
  explicit SentimentMap(const PluginContext& ctx) : source_(ctx.job_id) {
    SentimentOptions o;
    o.positive_lexicon = ctx.resolve(ctx.cfg().get_string("positive", "lexicon/positive.txt"));
    o.negative_lexicon = ctx.resolve(ctx.cfg().get_string("negative", "lexicon/negative.txt"));
    scorer_ = make_sentiment_scorer(ctx.cfg().get_string("scorer", "lexicon"), o);
  }

  StreamRecord apply(const StreamRecord& record) override {
    Tweet t = require_tweet(record);
    return enrichment_record(t, {{"sentiment", scorer_->score(t.text)}}, source_);
  }

 private:
  std::string source_;
  std::unique_ptr<SentimentScorer> scorer_;
};

// Window batches in; per-tweet misinformation tags and one WindowStats per
// window out. Keyword sets come from the cache and are refreshed with
// get_if_newer at most every poll_interval_ms. With require_keywords, the
// first batch waits until every key has a value.
class MisinformationTag final : public runtime::FlatMapPlugin {
 public:
  explicit MisinformationTag(const PluginContext& ctx)
      : cache_(ctx.cache),
        stopping_(ctx.stopping),
        source_(ctx.job_id),
        require_(ctx.cfg().get_bool("require_keywords", true)),
        interval_(ctx.cfg().get_uint("poll_interval_ms", 0)) {
    for (const auto& k : ctx.cfg().get_list("keys")) keys_[k] = Held{};
    if (keys_.empty()) {
      keys_[std::string(kMisinformationKeyPrefix) + "static"] = Held{};
      keys_[std::string(kMisinformationKeyPrefix) + "wikipedia"] = Held{};
    }
    if (!cache_) raise(ErrorCode::kState, "misinformation-tag needs a cache");
    KeywordSet tracked = load_keyword_files(ctx, "track", "relevance");
    if (!tracked.entries.empty()) tracked_ = std::make_unique<KeywordMatcher>(tracked.keywords());
  }

  void apply(const StreamRecord& record, std::vector<StreamRecord>& out) override {
    if (!runtime::is_window_batch(record)) raise(ErrorCode::kValidation, "expected a window batch");
    runtime::WindowBatch batch = runtime::decode_window_batch(record);
    refresh();
    std::vector<Tweet> tweets;
    tweets.reserve(batch.records.size());
    for (const auto& r : batch.records) tweets.push_back(require_tweet(r));
    TagResult res = tag_window(batch.start, batch.end, std::move(tweets), matcher_, tracked_.get());
    for (auto& t : res.tagged) {
      out.push_back(enrichment_record(t.tweet, {{"misinformation_keywords", t.keywords}}, source_));
    }
    if (res.stats) {
      StreamRecord s;
      s.payload = window_stats_to_json(*res.stats).dump();
      s.event_time = res.stats->window_start;
      s.key = format_iso8601(res.stats->window_start);
      s.source_id = source_;
      s.schema_tag = std::string(kWindowStatsTag);
      out.push_back(std::move(s));
    }
  }

 private:
  struct Held {
    std::uint64_t version = 0;
    std::vector<std::string> keywords;
    bool present = false;
  };

  bool all_present() const {
    for (const auto& [k, h] : keys_) {
      if (!h.present) return false;
    }
    return true;
  }

  void poll_cache() {
    bool changed = false;
    try {
      for (auto& [k, h] : keys_) {
        auto e = cache_->get_if_newer(k, h.version);
        if (!e) continue;
        try {
          h.keywords = keywords_from_json(e->value);
        } catch (const Error& err) {
          log().warn("keyword set {} v{} unreadable: {}", k, e->version, err.what());
        }
        h.version = e->version;
        h.present = true;
        changed = true;
      }
    } catch (const Error& e) {
      log().warn("{}: keyword cache unavailable, using the last known set: {}", source_, e.what());
    }
    last_poll_ = Clock::now();
    if (changed) {
      std::vector<std::string> all;
      for (const auto& [k, h] : keys_) all.insert(all.end(), h.keywords.begin(), h.keywords.end());
      matcher_ = KeywordMatcher(all);
    }
  }

  void refresh() {
    if (!polled_ || Clock::now() - last_poll_ >= std::chrono::milliseconds(interval_)) poll_cache();
    polled_ = true;
    if (!require_ || all_present()) return;
    log().info("{}: waiting for misinformation keywords", source_);
    while (!all_present()) {
      if (stopping_()) {
        log().warn("{}: stopping before every keyword set arrived; tagging with what is there", source_);
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      poll_cache();
    }
  }

  std::shared_ptr<cache::CacheApi> cache_;
  std::function<bool()> stopping_;
  std::string source_;
  bool require_;
  std::uint64_t interval_;
  std::map<std::string, Held> keys_;
  std::unique_ptr<KeywordMatcher> tracked_;
  KeywordMatcher matcher_;
  bool polled_ = false;
  Clock::time_point last_poll_{};
};

// Articles and static lists in, (cache key, JSON keyword array) records out.
class ExtractMisinformation final : public runtime::FlatMapPlugin {
 public:
  explicit ExtractMisinformation(const PluginContext& ctx)
      : source_(ctx.job_id),
        prefix_(ctx.cfg().get_string("prefix", std::string(kMisinformationKeyPrefix))) {}

  void apply(const StreamRecord& record, std::vector<StreamRecord>& out) override {
    std::vector<std::string> keywords;
    std::string name = record.key.value_or("");
    if (record.schema_tag == kArticleTag) {
      keywords = extract_conspiracy_keywords(record.payload);
      if (name.empty()) name = "wikipedia";
    } else if (record.schema_tag == kKeywordListTag) {
      keywords = parse_keyword_lines(record.payload, "misinformation").keywords();
      if (name.empty()) name = "static";
    } else {
      raise(ErrorCode::kValidation, "unexpected record type '" + record.schema_tag + "'");
    }
    StreamRecord r;
    r.payload = keywords_to_json(keywords);
    r.event_time = record.event_time;
    r.key = prefix_ + name;
    r.source_id = source_;
    r.schema_tag = "keyword-set";
    out.push_back(std::move(r));
  }

 private:
  std::string source_;
  std::string prefix_;
};

// ---- emit --------------------------------------------------------------------

// Puts each record's payload under its key; unchanged values are skipped so
// replays do not bump versions.
class KeywordCacheEmit final : public runtime::EmitPlugin {
 public:
  explicit KeywordCacheEmit(const PluginContext& ctx) : cache_(ctx.cache) {
    if (!cache_) raise(ErrorCode::kState, "keyword-cache needs a cache");
  }
  void push(std::span<const StreamRecord> records) override {
    for (const auto& r : records) {
      if (!r.key) raise(ErrorCode::kValidation, "keyword-cache: record without key");
      auto cur = cache_->get(*r.key);
      if (cur && cur->value == r.payload) continue;
      std::uint64_t v = cache_->put(*r.key, r.payload);
      log().info("keyword set {} -> v{}", *r.key, v);
    }
  }

 private:
  std::shared_ptr<cache::CacheApi> cache_;
};

// The pipeline's keyed store: tweets (with enrichments) and window stats.
class TweetStoreEmit final : public runtime::EmitPlugin {
 public:
  explicit TweetStoreEmit(const PluginContext& ctx) : store_(open_store(ctx, "path")) {}

  void push(std::span<const StreamRecord> records) override {
    std::vector<runtime::KeyedStore::Upsert> batch;
    batch.reserve(records.size());
    for (const auto& r : records) {
      if (r.schema_tag == kEnrichmentTag) {
        auto j = nlohmann::json::parse(r.payload, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("tweet") || !j["tweet"].is_object()) {
          raise(ErrorCode::kValidation, "tweet-store: malformed enrichment record");
        }
        nlohmann::json doc = j["tweet"];
        if (auto e = j.find("enrichments"); e != j.end() && e->is_object()) {
          for (auto it = e->begin(); it != e->end(); ++it) doc[it.key()] = it.value();
        }
        batch.push_back({std::string(kTweetsCollection), r.key.value_or(""), std::move(doc)});
      } else if (r.schema_tag == kTweetJsonTag) {
        Tweet t = require_tweet(r);
        batch.push_back({std::string(kTweetsCollection), std::to_string(t.tweet_id), tweet_document(t)});
      } else if (r.schema_tag == kWindowStatsTag) {
        auto j = nlohmann::json::parse(r.payload, nullptr, false);
        WindowStats s = window_stats_from_json(j);
        batch.push_back({std::string(kWindowStatsCollection), format_iso8601(s.window_start),
                         window_stats_to_json(s)});
      } else {
        raise(ErrorCode::kValidation, "tweet-store: unsupported record type '" + r.schema_tag + "'");
      }
      if (batch.back().key.empty()) raise(ErrorCode::kValidation, "tweet-store: record without key");
    }
    store_->upsert_batch(batch);
  }

 private:
  std::shared_ptr<runtime::KeyedStore> store_;
};

template <typename T>
auto with_ctx() {
  return [](const PluginContext& ctx) { return std::make_unique<T>(ctx); };
}

}  // namespace

void register_covid_plugins(runtime::PluginRegistry& r) {
  r.add_ingest("synthetic-generator", with_ctx<GeneratorIngest>());
  r.add_ingest("keyword-source", with_ctx<KeywordSourceIngest>());
  r.add_flatmap("extract-metadata", with_ctx<ExtractMetadata>());
  r.add_map("sentiment", with_ctx<SentimentMap>());
  r.add_flatmap("misinformation-tag", with_ctx<MisinformationTag>());
  r.add_flatmap("extract-misinformation", with_ctx<ExtractMisinformation>());
  r.add_emit("keyword-cache", with_ctx<KeywordCacheEmit>());
  r.add_emit("tweet-store", with_ctx<TweetStoreEmit>());
}

}  // namespace edna::covid
