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

#include "edna/runtime/config.hpp"

#include <charconv>
#include <cstdlib>

#include "edna/common/error.hpp"

namespace edna::runtime {

ConfigValue ConfigValue::string(std::string text) {
  ConfigValue v;
  v.kind_ = Kind::kString;
  v.text_ = std::move(text);
  return v;
}

ConfigValue ConfigValue::number(std::string text) {
  ConfigValue v;
  v.kind_ = Kind::kNumber;
  v.text_ = std::move(text);
  return v;
}

ConfigValue ConfigValue::boolean(bool value) {
  ConfigValue v;
  v.kind_ = Kind::kBool;
  v.text_ = value ? "true" : "false";
  return v;
}

ConfigValue ConfigValue::list(std::vector<std::string> items) {
  ConfigValue v;
  v.kind_ = Kind::kList;
  v.items_ = std::move(items);
  return v;
}

const ConfigValue* PluginConfig::find(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string PluginConfig::get_string(const std::string& key, std::string fallback) const {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind() == ConfigValue::Kind::kList) {
    raise(ErrorCode::kValidation, "config key '" + key + "': expected a scalar, got a list");
  }
  return v->text();
}

std::string PluginConfig::require_string(const std::string& key) const {
  if (!contains(key)) raise(ErrorCode::kValidation, "missing config key '" + key + "'");
  return get_string(key);
}

std::int64_t PluginConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  const std::string& t = v->text();
  std::int64_t out = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (v->kind() != ConfigValue::Kind::kNumber || res.ec != std::errc{} ||
      res.ptr != t.data() + t.size()) {
    raise(ErrorCode::kValidation, "config key '" + key + "': expected an integer");
  }
  return out;
}

std::uint64_t PluginConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  std::int64_t v = get_int(key, static_cast<std::int64_t>(fallback));
  if (v < 0) raise(ErrorCode::kValidation, "config key '" + key + "': must be >= 0");
  return static_cast<std::uint64_t>(v);
}

double PluginConfig::get_double(const std::string& key, double fallback) const {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind() != ConfigValue::Kind::kNumber) {
    raise(ErrorCode::kValidation, "config key '" + key + "': expected a number");
  }
  char* end = nullptr;
  double out = std::strtod(v->text().c_str(), &end);
  if (end != v->text().c_str() + v->text().size()) {
    raise(ErrorCode::kValidation, "config key '" + key + "': expected a number");
  }
  return out;
}

bool PluginConfig::get_bool(const std::string& key, bool fallback) const {
  const ConfigValue* v = find(key);
  if (v == nullptr) return fallback;
  if (v->kind() != ConfigValue::Kind::kBool) {
    raise(ErrorCode::kValidation, "config key '" + key + "': expected true or false");
  }
  return v->text() == "true";
}

std::vector<std::string> PluginConfig::get_list(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (v == nullptr) return {};
  if (v->kind() == ConfigValue::Kind::kList) return v->items();
  return {v->text()};
}

}  // namespace edna::runtime
