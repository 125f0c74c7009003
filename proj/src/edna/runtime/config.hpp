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
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace edna::runtime {

// A flat configuration value. Scalars keep their verbatim source text so
// plugin configs reach the runtime unchanged.
class ConfigValue {
 public:
  enum class Kind { kString, kNumber, kBool, kList };

  static ConfigValue string(std::string text);
  static ConfigValue number(std::string text);
  static ConfigValue boolean(bool value);
  static ConfigValue list(std::vector<std::string> items);

  Kind kind() const noexcept { return kind_; }
  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& items() const noexcept { return items_; }

  bool operator==(const ConfigValue&) const = default;

 private:
  Kind kind_ = Kind::kString;
  std::string text_;
  std::vector<std::string> items_;
};

class PluginConfig {
 public:
  void set(std::string key, ConfigValue value) { values_[std::move(key)] = std::move(value); }
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const ConfigValue* find(const std::string& key) const;

  // Typed accessors throw kValidation naming the key on a type mismatch.
  std::string get_string(const std::string& key, std::string fallback = {}) const;
  std::string require_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // A scalar string reads as a one-element list.
  std::vector<std::string> get_list(const std::string& key) const;

  const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }

  bool operator==(const PluginConfig&) const = default;

 private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace edna::runtime
