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

#include "edna/covid/generator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"
#include "edna/covid/tweet.hpp"

namespace edna::covid {
namespace {

using nlohmann::json;

// Filler vocabulary. None of these is (or contains, for CJK) a shipped
// keyword; a few are sentiment lexicon words.
const std::vector<std::string_view>& filler(std::string_view lang) {
  static const std::vector<std::string_view> en = {
      "today", "people", "news", "city", "update", "school", "work", "home", "family", "week",
      "report", "health", "doctors", "hospital", "stay", "safe", "good", "great", "happy", "hope",
      "bad", "sad", "worried", "terrible", "thanks", "love", "fear", "government", "cases",
      "lockdown", "testing", "open", "closed", "store", "friends", "weather", "music", "game",
      "carnival", "masks", "viral", "chinatown", "new", "day"};
  static const std::vector<std::string_view> es = {
      "hoy", "gente", "noticias", "ciudad", "casa", "familia", "semana", "salud", "hospital",
      "bueno", "feliz", "malo", "triste", "gracias", "miedo", "gobierno", "casos", "escuela"};
  static const std::vector<std::string_view> fr = {
      "aujourd'hui", "gens", "nouvelles", "ville", "maison", "famille", "semaine", "santé",
      "hôpital", "bon", "heureux", "mauvais", "triste", "merci", "peur", "gouvernement"};
  static const std::vector<std::string_view> pt = {
      "hoje", "pessoas", "notícias", "cidade", "casa", "família", "semana", "saúde",
      "hospital", "bom", "feliz", "ruim", "triste", "obrigado", "medo", "governo"};
  static const std::vector<std::string_view> in = {
      "hari", "ini", "orang", "berita", "kota", "rumah", "keluarga", "minggu", "kesehatan",
      "rumah-sakit", "baik", "senang", "buruk", "sedih", "terima", "kasih", "takut"};
  static const std::vector<std::string_view> zh = {"今天", "人们", "新闻", "城市", "家庭",
                                                    "医院", "学校", "工作", "朋友", "天气"};
  static const std::vector<std::string_view> ja = {"今日", "人々", "ニュース", "都市", "家族",
                                                    "学校", "仕事", "友達", "天気"};
  if (lang == "es") return es;
  if (lang == "fr") return fr;
  if (lang == "pt") return pt;
  if (lang == "in" || lang == "id" || lang == "ms" || lang == "jv") return in;
  if (lang == "zh") return zh;
  if (lang == "ja") return ja;
  return en;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  raise(ErrorCode::kValidation, "profile field '" + field + "': " + why);
}

double number_field(const json& obj, const std::string& name, const std::string& path,
                    double fallback) {
  auto it = obj.find(name);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) bad_field(path, "expected a number");
  return it->get<double>();
}

double probability_field(const json& obj, const std::string& name, double fallback) {
  double v = number_field(obj, name, name, fallback);
  if (!(v >= 0.0 && v <= 1.0)) bad_field(name, "must be within [0, 1]");
  return v;
}

Timestamp time_field(const json& v, const std::string& path) {
  if (!v.is_string()) bad_field(path, "expected an ISO-8601 timestamp string");
  auto t = parse_iso8601(v.get<std::string>());
  if (!t) bad_field(path, "invalid timestamp '" + v.get<std::string>() + "'");
  return *t;
}

}  // namespace

DriftProfile parse_drift_profile(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorCode::kValidation, "profile is not valid JSON");
  if (!j.is_object()) raise(ErrorCode::kValidation, "profile must be a JSON object");
  static const std::vector<std::string> known = {"seed", "rate", "sampling_ratio", "start",
                                                 "malformed_rate", "truncated_rate", "empty_rate",
                                                 "retweet_rate", "schedule"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      bad_field(it.key(), "unknown field");
    }
  }
  DriftProfile p;
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) bad_field("seed", "expected a non-negative integer");
    p.seed = it->get<std::uint64_t>();
  }
  p.rate = number_field(j, "rate", "rate", p.rate);
  p.sampling_ratio = number_field(j, "sampling_ratio", "sampling_ratio", p.sampling_ratio);
  double malformed = probability_field(j, "malformed_rate", 0.01);
  p.truncated_rate = probability_field(j, "truncated_rate", malformed / 2);
  p.empty_rate = probability_field(j, "empty_rate", malformed / 2);
  p.retweet_rate = probability_field(j, "retweet_rate", 0.0);

  auto sched = j.find("schedule");
  if (sched == j.end() || !sched->is_array()) bad_field("schedule", "expected an array");
  for (std::size_t i = 0; i < sched->size(); ++i) {
    const json& s = (*sched)[i];
    std::string path = "schedule[" + std::to_string(i) + "]";
    if (!s.is_object()) bad_field(path, "expected an object");
    ScheduleSegment seg;
    auto st = s.find("start");
    if (st == s.end()) bad_field(path + ".start", "missing");
    seg.start = time_field(*st, path + ".start");
    if (auto pv = s.find("prevalence"); pv != s.end()) {
      if (!pv->is_object()) bad_field(path + ".prevalence", "expected an object");
      for (auto it = pv->begin(); it != pv->end(); ++it) {
        if (!it->is_number()) bad_field(path + ".prevalence." + it.key(), "expected a number");
        seg.prevalence[it.key()] = it->get<double>();
      }
    }
    auto lg = s.find("languages");
    if (lg == s.end()) {
      seg.languages["en"] = 1.0;
    } else {
      if (!lg->is_object()) bad_field(path + ".languages", "expected an object");
      for (auto it = lg->begin(); it != lg->end(); ++it) {
        if (!it->is_number()) bad_field(path + ".languages." + it.key(), "expected a number");
        seg.languages[it.key()] = it->get<double>();
      }
    }
    p.schedule.push_back(std::move(seg));
  }
  if (auto st = j.find("start"); st != j.end()) {
    p.start = time_field(*st, "start");
  } else if (!p.schedule.empty()) {
    p.start = p.schedule.front().start;
  }
  validate_drift_profile(p);
  return p;
}

DriftProfile load_drift_profile(const std::filesystem::path& path) {
  return parse_drift_profile(read_file(path));
}

void validate_drift_profile(const DriftProfile& p) {
  if (!(p.rate > 0.0) || !std::isfinite(p.rate)) bad_field("rate", "must be positive");
  if (!(p.sampling_ratio > 0.0 && p.sampling_ratio <= 1.0)) {
    bad_field("sampling_ratio", "must be within (0, 1]");
  }
  for (auto [name, v] : {std::pair{"truncated_rate", p.truncated_rate},
                         std::pair{"empty_rate", p.empty_rate},
                         std::pair{"retweet_rate", p.retweet_rate}}) {
    if (!(v >= 0.0 && v <= 1.0)) bad_field(name, "must be within [0, 1]");
  }
  if (p.truncated_rate + p.empty_rate + p.retweet_rate > 1.0) {
    bad_field("retweet_rate", "truncated, empty and retweet rates add up to more than 1");
  }
  if (p.schedule.empty()) bad_field("schedule", "must have at least one segment");
  for (std::size_t i = 0; i < p.schedule.size(); ++i) {
    const auto& seg = p.schedule[i];
    std::string path = "schedule[" + std::to_string(i) + "]";
    if (i > 0 && !(seg.start > p.schedule[i - 1].start)) {
      bad_field(path + ".start", "segment start times must be strictly increasing");
    }
    for (const auto& [k, v] : seg.prevalence) {
      if (!(v >= 0.0 && v <= 1.0)) bad_field(path + ".prevalence." + k, "must be within [0, 1]");
    }
    if (seg.languages.empty()) bad_field(path + ".languages", "must not be empty");
    double sum = 0;
    for (const auto& [code, w] : seg.languages) {
      if (!is_known_language(code)) bad_field(path + ".languages." + code, "unknown language code");
      if (!(w >= 0.0)) bad_field(path + ".languages." + code, "weight must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) bad_field(path + ".languages", "weights must sum to 1");
  }
}

TweetGenerator::TweetGenerator(DriftProfile profile, std::string source_id)
    : profile_(std::move(profile)), source_id_(std::move(source_id)) {
  validate_drift_profile(profile_);
  interval_ms_ = 1000.0 / (profile_.rate * profile_.sampling_ratio);
}

Timestamp TweetGenerator::time_of(std::uint64_t index) const {
  auto offset = static_cast<std::int64_t>(std::floor(static_cast<double>(index) * interval_ms_));
  return profile_.start + Millis{offset};
}

std::size_t TweetGenerator::segment_index(Timestamp t) const {
  std::size_t idx = 0;
  for (std::size_t i = 1; i < profile_.schedule.size(); ++i) {
    if (profile_.schedule[i].start <= t) idx = i;
  }
  return idx;
}

const ScheduleSegment& TweetGenerator::segment_at(Timestamp t) const {
  return profile_.schedule[segment_index(t)];
}

Generated TweetGenerator::generate(std::uint64_t index) const {
  std::mt19937_64 rng(splitmix64(profile_.seed ^ splitmix64(index)));
  Generated g;
  g.tweet_id = kIdBase + index;
  Timestamp t = time_of(index);
  const ScheduleSegment& seg = segment_at(t);

  double u = unit(rng);
  if (u < profile_.truncated_rate) {
    g.injection = Injection::kTruncated;
  } else if (u < profile_.truncated_rate + profile_.empty_rate) {
    g.injection = Injection::kEmpty;
  } else if (index > 0 && u < profile_.truncated_rate + profile_.empty_rate + profile_.retweet_rate) {
    g.injection = Injection::kRetweet;
  }

  std::string lang = seg.languages.rbegin()->first;
  double pick = unit(rng), acc = 0;
  for (const auto& [code, w] : seg.languages) {
    acc += w;
    if (pick < acc) {
      lang = code;
      break;
    }
  }

  const auto& words = filler(lang);
  std::vector<std::string> text_words;
  std::size_t n = 4 + below(rng, 9);
  for (std::size_t i = 0; i < n; ++i) text_words.emplace_back(words[below(rng, words.size())]);

  Tweet tw;
  tw.tweet_id = g.tweet_id;
  tw.lang = lang;
  tw.created_at = t;
  if (g.injection == Injection::kRetweet) {
    std::uint64_t back = 1 + below(rng, static_cast<std::size_t>(std::min<std::uint64_t>(index, 1000)));
    tw.retweet_of = kIdBase + index - back;
    text_words.insert(text_words.begin(), "RT");
  } else {
    for (const auto& [keyword, p] : seg.prevalence) {
      if (unit(rng) < p) {
        g.keywords.push_back(keyword);
        text_words.insert(text_words.begin() + static_cast<std::ptrdiff_t>(below(rng, text_words.size() + 1)),
                          keyword);
      }
    }
  }
  for (std::size_t i = 0; i < text_words.size(); ++i) {
    if (i) tw.text.push_back(' ');
    tw.text += text_words[i];
  }
  if (g.injection == Injection::kEmpty) {
    tw.text.clear();
    g.keywords.clear();
  }

  std::string payload = tweet_json(tw).dump();
  if (g.injection == Injection::kTruncated) {
    payload.resize(1 + below(rng, payload.size() - 1));
    g.keywords.clear();
  }
  g.record.payload = std::move(payload);
  g.record.event_time = t;
  g.record.key = std::to_string(g.tweet_id);
  g.record.source_id = source_id_;
  g.record.schema_tag = std::string(kTweetJsonTag);
  return g;
}

void write_corpus(const TweetGenerator& generator, std::uint64_t budget,
                  const std::filesystem::path& out) {
  Bytes data;
  for (std::uint64_t i = 0; i < budget; ++i) append_frame(data, generator.record(i));
  atomic_write_file(out, data);
}

}  // namespace edna::covid
