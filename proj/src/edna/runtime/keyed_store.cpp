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

#include "edna/runtime/keyed_store.hpp"

#include <sqlite3.h>

#include "edna/common/error.hpp"

namespace edna::runtime {

namespace {

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &s_, nullptr) != SQLITE_OK) {
      raise(ErrorCode::kIo, std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(s_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  void bind(int i, std::string_view text) {
    sqlite3_bind_text(s_, i, text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT);
  }
  // True while a row is available.
  bool step() {
    int rc = sqlite3_step(s_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    raise(ErrorCode::kIo, std::string("sqlite: ") + sqlite3_errmsg(db_));
  }
  std::string text(int col) {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(s_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(s_, col))) : std::string();
  }
  std::int64_t integer(int col) { return sqlite3_column_int64(s_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* s_ = nullptr;
};

nlohmann::json parse_doc(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kCorruptLog, std::string("stored document is not JSON: ") + e.what());
  }
}

}  // namespace

nlohmann::json merge_document(const nlohmann::json& base, const nlohmann::json& update) {
  if (!update.is_object() || !base.is_object()) return update;
  nlohmann::json out = base;
  for (auto it = update.begin(); it != update.end(); ++it) out[it.key()] = it.value();
  return out;
}

std::unique_ptr<KeyedStore> KeyedStore::open(const std::filesystem::path& path, bool read_only) {
  if (!read_only && path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (read_only && !std::filesystem::exists(path)) {
    raise(ErrorCode::kNotFound, "store " + path.string() + " does not exist");
  }
  sqlite3* db = nullptr;
  int flags = SQLITE_OPEN_FULLMUTEX |
              (read_only ? SQLITE_OPEN_READONLY : SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
  if (sqlite3_open_v2(path.c_str(), &db, flags, nullptr) != SQLITE_OK) {
    std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    raise(ErrorCode::kIo, "cannot open store " + path.string() + ": " + msg);
  }
  std::unique_ptr<KeyedStore> store(new KeyedStore(db, path));
  sqlite3_busy_timeout(db, 10'000);
  if (!read_only) {
    store->exec("PRAGMA journal_mode=WAL");
    store->exec("PRAGMA synchronous=NORMAL");
    store->exec(
        "CREATE TABLE IF NOT EXISTS documents ("
        " collection TEXT NOT NULL, key TEXT NOT NULL, doc TEXT NOT NULL,"
        " PRIMARY KEY (collection, key)) WITHOUT ROWID");
  }
  return store;
}

KeyedStore::~KeyedStore() { sqlite3_close(db_); }

void KeyedStore::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    raise(ErrorCode::kIo, std::string("sqlite: ") + msg);
  }
}

bool KeyedStore::upsert_locked(std::string_view collection, std::string_view key,
                               const nlohmann::json& doc) {
  std::optional<nlohmann::json> current;
  {
    Stmt q(db_, "SELECT doc FROM documents WHERE collection = ?1 AND key = ?2");
    q.bind(1, collection);
    q.bind(2, key);
    if (q.step()) current = parse_doc(q.text(0));
  }
  nlohmann::json next = current ? merge_document(*current, doc) : doc;
  if (current && *current == next) return false;
  Stmt w(db_, "INSERT OR REPLACE INTO documents (collection, key, doc) VALUES (?1, ?2, ?3)");
  w.bind(1, collection);
  w.bind(2, key);
  w.bind(3, next.dump());
  w.step();
  return true;
}

bool KeyedStore::upsert(std::string_view collection, std::string_view key, const nlohmann::json& doc) {
  std::lock_guard lock(mu_);
  return upsert_locked(collection, key, doc);
}

std::size_t KeyedStore::upsert_batch(const std::vector<Upsert>& batch) {
  std::lock_guard lock(mu_);
  exec("BEGIN IMMEDIATE");
  std::size_t changed = 0;
  try {
    for (const auto& u : batch) changed += upsert_locked(u.collection, u.key, u.doc) ? 1 : 0;
    exec("COMMIT");
  } catch (...) {
    char* err = nullptr;
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, &err);
    sqlite3_free(err);
    throw;
  }
  return changed;
}

std::optional<nlohmann::json> KeyedStore::get(std::string_view collection, std::string_view key) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT doc FROM documents WHERE collection = ?1 AND key = ?2");
  q.bind(1, collection);
  q.bind(2, key);
  if (!q.step()) return std::nullopt;
  return parse_doc(q.text(0));
}

void KeyedStore::for_each(std::string_view collection,
                          const std::function<void(const std::string&, const nlohmann::json&)>& fn) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT key, doc FROM documents WHERE collection = ?1 ORDER BY key");
  q.bind(1, collection);
  while (q.step()) fn(q.text(0), parse_doc(q.text(1)));
}

std::vector<std::string> KeyedStore::keys(std::string_view collection) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT key FROM documents WHERE collection = ?1 ORDER BY key");
  q.bind(1, collection);
  std::vector<std::string> out;
  while (q.step()) out.push_back(q.text(0));
  return out;
}

std::size_t KeyedStore::count(std::string_view collection) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT COUNT(*) FROM documents WHERE collection = ?1");
  q.bind(1, collection);
  q.step();
  return static_cast<std::size_t>(q.integer(0));
}

std::vector<std::string> KeyedStore::collections() {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT DISTINCT collection FROM documents ORDER BY collection");
  std::vector<std::string> out;
  while (q.step()) out.push_back(q.text(0));
  return out;
}

std::vector<std::string> KeyedStore::dump() {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT collection, key, doc FROM documents ORDER BY collection, key");
  std::vector<std::string> out;
  while (q.step()) out.push_back(q.text(0) + "\t" + q.text(1) + "\t" + q.text(2));
  return out;
}

}  // namespace edna::runtime
