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

#include "edna/app/app_config.hpp"

#include <charconv>
#include <map>
#include <regex>

#include "edna/common/error.hpp"
#include "edna/common/file_util.hpp"

namespace edna::app {

using runtime::ConfigValue;
using runtime::JobSpec;
using runtime::PluginConfig;
using runtime::ProcessKind;
using runtime::ProcessSpec;

const runtime::JobSpec* AppGraph::find_job(std::string_view id) const {
  for (const auto& j : jobs) {
    if (j.job_id == id) return &j;
  }
  return nullptr;
}

std::set<std::string> AppGraph::topics() const {
  std::set<std::string> out = declared_topics;
  for (const auto& j : jobs) {
    if (auto t = consumed_topic(j); !t.empty()) out.insert(t);
    if (auto t = produced_topic(j); !t.empty()) out.insert(t);
  }
  return out;
}

std::string consumed_topic(const JobSpec& job) {
  if (job.ingest.plugin != kBrokerTopicPlugin) return {};
  return job.ingest.config.get_string("topic");
}

std::string produced_topic(const JobSpec& job) {
  if (job.emit.plugin != kBrokerTopicPlugin) return {};
  return job.emit.config.get_string("topic");
}

void derive_edges(AppGraph& g) {
  g.edges.clear();
  g.external_sources.clear();
  g.external_sinks.clear();
  for (const auto& p : g.jobs) {
    std::string out = produced_topic(p);
    if (out.empty()) {
      g.external_sinks.push_back(p.job_id);
      continue;
    }
    for (const auto& c : g.jobs) {
      if (consumed_topic(c) == out) g.edges.push_back(Edge{p.job_id, out, c.job_id});
    }
  }
  for (const auto& j : g.jobs) {
    if (consumed_topic(j).empty()) g.external_sources.push_back(j.job_id);
  }
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
  raise(ErrorCode::kParse, "line " + std::to_string(line) + ": " + msg);
}

bool is_number(std::string_view s) {
  static const std::regex re(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][-+]?[0-9]+)?)");
  return std::regex_match(s.begin(), s.end(), re);
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  ConfigValue parse() {
    skip_ws();
    ConfigValue v;
    if (peek() == '[') {
      ++pos_;
      std::vector<std::string> items;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
      } else {
        while (true) {
          skip_ws();
          items.push_back(scalar_text());
          skip_ws();
          char c = peek();
          ++pos_;
          if (c == ']') break;
          if (c != ',') parse_error(line_, "expected ',' or ']' in list");
        }
      }
      v = ConfigValue::list(std::move(items));
    } else if (peek() == '"') {
      v = ConfigValue::string(quoted());
    } else {
      std::string word = bare();
      if (word == "true" || word == "false") v = ConfigValue::boolean(word == "true");
      else if (is_number(word)) v = ConfigValue::number(word);
      else if (word.empty()) parse_error(line_, "missing value");
      else parse_error(line_, "strings must be quoted: " + word);
    }
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') parse_error(line_, "unexpected text after value");
    return v;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  std::string bare() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != ',' &&
           s_[pos_] != ']' && s_[pos_] != '#') {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string scalar_text() {
    if (peek() == '"') return quoted();
    std::string w = bare();
    if (w == "true" || w == "false" || is_number(w)) return w;
    parse_error(line_, w.empty() ? "empty list item" : "strings must be quoted: " + w);
  }
  std::string quoted() {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) parse_error(line_, "unterminated string");
      char c = s_[pos_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) parse_error(line_, "unterminated string");
      char e = s_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: parse_error(line_, std::string("unknown escape \\") + e);
      }
    }
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct PendingProcess {
  std::optional<ProcessKind> kind;
  std::string plugin;
  PluginConfig config;
  std::size_t line = 0;
};

struct PendingJob {
  JobSpec spec;
  std::size_t line = 0;
  std::map<std::size_t, PendingProcess> process;
  std::set<std::string> seen_keys;
};

std::uint64_t as_count(const ConfigValue& v, const std::string& key, std::size_t line) {
  std::uint64_t out = 0;
  const std::string& t = v.text();
  auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (v.kind() != ConfigValue::Kind::kNumber || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    parse_error(line, key + " must be a non-negative integer");
  }
  return out;
}

std::string as_string(const ConfigValue& v, const std::string& key, std::size_t line) {
  if (v.kind() != ConfigValue::Kind::kString) parse_error(line, key + " must be a quoted string");
  return v.text();
}

void job_key(PendingJob& job, const std::string& key, const ConfigValue& v, std::size_t line) {
  if (!job.seen_keys.insert(key).second) parse_error(line, "duplicate key " + key);
  static const std::regex process_re(R"(process\[([0-9]+)\]\.(kind|plugin|config\.(.+)))");
  std::smatch m;
  if (key == "id") job.spec.job_id = as_string(v, key, line);
  else if (key == "group") job.spec.consumer_group = as_string(v, key, line);
  else if (key == "batch_size") job.spec.batch_size = as_count(v, key, line);
  else if (key == "buffer_capacity") job.spec.buffer_capacity = as_count(v, key, line);
  else if (key == "ingest.plugin") job.spec.ingest.plugin = as_string(v, key, line);
  else if (key == "emit.plugin") job.spec.emit.plugin = as_string(v, key, line);
  else if (key.starts_with("ingest.config.") && key.size() > 14) job.spec.ingest.config.set(key.substr(14), v);
  else if (key.starts_with("emit.config.") && key.size() > 12) job.spec.emit.config.set(key.substr(12), v);
  else if (std::regex_match(key, m, process_re)) {
    PendingProcess& p = job.process[std::stoul(m[1].str())];
    if (p.line == 0) p.line = line;
    if (m[2] == "kind") {
      ProcessKind k;
      if (!runtime::parse_process_kind(as_string(v, key, line), k)) {
        parse_error(line, "unknown process kind '" + v.text() + "'");
      }
      p.kind = k;
    } else if (m[2] == "plugin") {
      p.plugin = as_string(v, key, line);
    } else {
      p.config.set(m[3].str(), v);
    }
  } else {
    parse_error(line, "unknown job key " + key);
  }
}

JobSpec finish_job(PendingJob& job) {
  if (job.spec.job_id.empty()) parse_error(job.line, "job without id");
  if (job.spec.ingest.plugin.empty()) parse_error(job.line, "job " + job.spec.job_id + ": missing ingest.plugin");
  if (job.spec.emit.plugin.empty()) parse_error(job.line, "job " + job.spec.job_id + ": missing emit.plugin");
  std::size_t expected = 0;
  for (auto& [index, p] : job.process) {
    if (index != expected++) {
      parse_error(p.line, "job " + job.spec.job_id + ": process steps must be numbered from 0 without gaps");
    }
    if (!p.kind) parse_error(p.line, "job " + job.spec.job_id + ": process[" + std::to_string(index) + "] has no kind");
    if (p.plugin.empty()) {
      parse_error(p.line, "job " + job.spec.job_id + ": process[" + std::to_string(index) + "] has no plugin");
    }
    job.spec.process_chain.push_back(ProcessSpec{*p.kind, p.plugin, std::move(p.config)});
  }
  return std::move(job.spec);
}

}  // namespace

AppConfig parse_app_config(std::string_view text) {
  AppConfig cfg;
  std::string section;
  std::vector<PendingJob> jobs;
  std::set<std::string> seen_section_keys;
  std::set<std::string> seen_sections;
  std::size_t line_no = 0;

  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      auto close = line.find(']');
      if (close == std::string_view::npos) parse_error(line_no, "unterminated section header");
      std::string_view rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') parse_error(line_no, "text after section header");
      section = std::string(trim(line.substr(1, close - 1)));
      if (section == "job") {
        jobs.push_back(PendingJob{});
        jobs.back().line = line_no;
      } else if (section == "app" || section == "broker" || section == "cache" || section == "restart") {
        if (!seen_sections.insert(section).second) parse_error(line_no, "duplicate section [" + section + "]");
      } else {
        parse_error(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) parse_error(line_no, "empty key");
    ConfigValue v = ValueParser(line.substr(eq + 1), line_no).parse();
    if (section.empty()) parse_error(line_no, "key outside of any section");

    if (section == "job") {
      job_key(jobs.back(), key, v, line_no);
      continue;
    }
    if (!seen_section_keys.insert(section + "." + key).second) parse_error(line_no, "duplicate key " + key);
    if (section == "app") {
      if (key == "id") {
        cfg.graph.app_id = as_string(v, key, line_no);
      } else if (key == "mode") {
        std::string m = as_string(v, key, line_no);
        if (m == "embedded") cfg.mode = DeployMode::kEmbedded;
        else if (m == "standalone") cfg.mode = DeployMode::kStandalone;
        else parse_error(line_no, "mode must be embedded or standalone");
      } else {
        cfg.app_values.set(key, v);
      }
    } else if (section == "broker") {
      if (key == "root") cfg.broker.root = as_string(v, key, line_no);
      else if (key == "segment_bytes") cfg.broker.segment_bytes = as_count(v, key, line_no);
      else if (key == "flush_interval_ms") cfg.broker.flush_interval = Millis{static_cast<std::int64_t>(as_count(v, key, line_no))};
      else if (key == "flush") {
        std::string f = as_string(v, key, line_no);
        if (f == "every-append") cfg.broker.flush_every_append = true;
        else if (f == "interval") cfg.broker.flush_every_append = false;
        else parse_error(line_no, "flush must be every-append or interval");
      } else if (key == "topics") {
        if (v.kind() != ConfigValue::Kind::kList && v.kind() != ConfigValue::Kind::kString) {
          parse_error(line_no, "topics must be a list of strings");
        }
        for (const auto& t : v.kind() == ConfigValue::Kind::kList ? v.items() : std::vector{v.text()}) {
          cfg.graph.declared_topics.insert(t);
        }
      } else {
        parse_error(line_no, "unknown broker key " + key);
      }
    } else if (section == "cache") {
      if (key == "poll_interval_ms") cfg.cache_poll_interval = Millis{static_cast<std::int64_t>(as_count(v, key, line_no))};
      else parse_error(line_no, "unknown cache key " + key);
    } else if (section == "restart") {
      if (key == "max_restarts") cfg.restart.max_restarts = as_count(v, key, line_no);
      else if (key == "window_ms") cfg.restart.window = Millis{static_cast<std::int64_t>(as_count(v, key, line_no))};
      else if (key == "backoff_ms") {
        cfg.restart.backoff.clear();
        for (const auto& item : v.kind() == ConfigValue::Kind::kList ? v.items() : std::vector{v.text()}) {
          std::uint64_t ms = 0;
          auto res = std::from_chars(item.data(), item.data() + item.size(), ms);
          if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            parse_error(line_no, "backoff_ms entries must be integers");
          }
          cfg.restart.backoff.push_back(Millis{static_cast<std::int64_t>(ms)});
        }
      } else {
        parse_error(line_no, "unknown restart key " + key);
      }
    }
  }

  std::set<std::string> ids;
  for (auto& pj : jobs) {
    JobSpec spec = finish_job(pj);
    if (!ids.insert(spec.job_id).second) {
      raise(ErrorCode::kValidation, "line " + std::to_string(pj.line) + ": duplicate job id '" + spec.job_id + "'");
    }
    cfg.graph.jobs.push_back(std::move(spec));
  }
  derive_edges(cfg.graph);
  return cfg;
}

AppConfig load_app_config(const std::string& path) {
  Bytes text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    raise(ErrorCode::kNotFound, "cannot read config " + path + ": " + e.what());
  }
  return parse_app_config(text);
}

}  // namespace edna::app
