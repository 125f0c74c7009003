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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

struct sqlite3;

namespace edna::runtime {

// Embedded keyed document store (SQLite). Documents are JSON objects stored
// under (collection, key); an upsert merges top-level fields, last writer
// wins per field, and writing identical content leaves the row untouched.
class KeyedStore {
 public:
  static std::unique_ptr<KeyedStore> open(const std::filesystem::path& path, bool read_only = false);
  ~KeyedStore();

  KeyedStore(const KeyedStore&) = delete;
  KeyedStore& operator=(const KeyedStore&) = delete;

  struct Upsert {
    std::string collection;
    std::string key;
    nlohmann::json doc;
  };

  // True when the stored document changed.
  bool upsert(std::string_view collection, std::string_view key, const nlohmann::json& doc);
  // All-or-nothing; returns how many rows changed.
  std::size_t upsert_batch(const std::vector<Upsert>& batch);

  std::optional<nlohmann::json> get(std::string_view collection, std::string_view key);
  // Sorted by key.
  void for_each(std::string_view collection,
                const std::function<void(const std::string& key, const nlohmann::json& doc)>& fn);
  std::vector<std::string> keys(std::string_view collection);
  std::size_t count(std::string_view collection);
  std::vector<std::string> collections();
  // Every row as "collection\tkey\tdoc" lines, sorted; used for
  // row-for-row comparison of two stores.
  std::vector<std::string> dump();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  KeyedStore(sqlite3* db, std::filesystem::path path) : db_(db), path_(std::move(path)) {}
  bool upsert_locked(std::string_view collection, std::string_view key, const nlohmann::json& doc);
  void exec(const char* sql);

  std::mutex mu_;
  sqlite3* db_ = nullptr;
  std::filesystem::path path_;
};

// Merges top-level fields of `update` into `base`; a non-object update
// replaces base.
nlohmann::json merge_document(const nlohmann::json& base, const nlohmann::json& update);

}  // namespace edna::runtime
