#include "simdeck/store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <utility>

#include "simdeck/error.hpp"
#include "simdeck/model_json.hpp"

namespace simdeck {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS tb_simulation (
  id       INTEGER PRIMARY KEY,
  name     TEXT NOT NULL UNIQUE,
  app_name TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS tb_parameter (
  id         INTEGER PRIMARY KEY,
  sim_id     INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
  name       TEXT NOT NULL,
  kind       TEXT NOT NULL,
  value      TEXT NOT NULL,
  list_index INTEGER NOT NULL DEFAULT -1,
  UNIQUE (sim_id, name, list_index)
);
CREATE TABLE IF NOT EXISTS tb_dataarray (
  id     INTEGER PRIMARY KEY,
  sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
  name   TEXT NOT NULL,
  kind   TEXT NOT NULL,
  UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_parameterwidget (
  id         INTEGER PRIMARY KEY,
  sim_id     INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
  kind       TEXT NOT NULL,
  name       TEXT NOT NULL,
  x          INTEGER NOT NULL DEFAULT 0,
  y          INTEGER NOT NULL DEFAULT 0,
  config     TEXT NOT NULL,
  target     TEXT NOT NULL,
  list_index INTEGER NOT NULL DEFAULT -1,
  UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_datawidget (
  id     INTEGER PRIMARY KEY,
  sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
  kind   TEXT NOT NULL,
  name   TEXT NOT NULL,
  x      INTEGER NOT NULL DEFAULT 0,
  y      INTEGER NOT NULL DEFAULT 0,
  config TEXT NOT NULL,
  target TEXT NOT NULL,
  UNIQUE (sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_commentwidget (
  id     INTEGER PRIMARY KEY,
  sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
  name   TEXT NOT NULL,
  x      INTEGER NOT NULL DEFAULT 0,
  y      INTEGER NOT NULL DEFAULT 0,
  body   TEXT NOT NULL,
  UNIQUE (sim_id, name)
);
)sql";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
      throw Error("sql", sqlite3_errmsg(db));
  }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;
  ~Statement() { sqlite3_finalize(stmt_); }

  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, int v) { return bind(i, static_cast<std::int64_t>(v)); }
  Statement& bind(int i, std::string_view v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }

  /// true while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error("sql", sqlite3_errmsg(db_));
  }

  /// Executes to completion and rewinds so the statement can be rebound.
  void run() {
    while (step()) {
    }
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  std::int64_t int_col(int i) const { return sqlite3_column_int64(stmt_, i); }
  std::string text_col(int i) const {
    const auto* p = sqlite3_column_text(stmt_, i);
    return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(sqlite3_column_bytes(stmt_, i)))
             : std::string();
  }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) throw Error("sql", sqlite3_errmsg(db_));
  }

  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

int exec(sqlite3* db, const char* sql) { return sqlite3_exec(db, sql, nullptr, nullptr, nullptr); }

void exec_or_throw(sqlite3* db, const char* sql) {
  if (exec(db, sql) != SQLITE_OK) throw Error("sql", sqlite3_errmsg(db));
}

std::optional<std::int64_t> context_id(sqlite3* db, std::string_view name) {
  Statement s(db, "SELECT id FROM tb_simulation WHERE name = ?1");
  s.bind(1, name);
  if (s.step()) return s.int_col(0);
  return std::nullopt;
}

/// Runs fn inside a write transaction; any failure rolls back and surfaces
/// as Error(failure_code) unless fn already threw a domain error.
template <class Fn>
void with_transaction(sqlite3* db, Fn&& fn) {
  if (exec(db, "BEGIN IMMEDIATE") != SQLITE_OK) throw Error("write failed", sqlite3_errmsg(db));
  try {
    fn();
    if (exec(db, "COMMIT") != SQLITE_OK) throw Error("write failed", sqlite3_errmsg(db));
  } catch (const Error& e) {
    exec(db, "ROLLBACK");
    if (e.code() == "sql") throw Error("write failed", e.what());
    throw;
  }
}

}  // namespace

std::filesystem::path default_db_path(const std::filesystem::path& app_source_path,
                                      const std::optional<std::filesystem::path>& cli_arg) {
  if (cli_arg) return *cli_arg;
  if (app_source_path.empty()) throw Error("bad path", "empty application source path");
  auto p = app_source_path;
  p.replace_extension(".db");
  return p;
}

Store::Store(std::filesystem::path path, sqlite3* db) : path_(std::move(path)), db_(db) {}

Store::Store(Store&& o) noexcept : path_(std::move(o.path_)), db_(std::exchange(o.db_, nullptr)) {}

Store& Store::operator=(Store&& o) noexcept {
  if (this != &o) {
    close();
    path_ = std::move(o.path_);
    db_ = std::exchange(o.db_, nullptr);
  }
  return *this;
}

Store::~Store() { close(); }

void Store::close() noexcept {
  if (db_) sqlite3_close_v2(db_);
  db_ = nullptr;
}

Store Store::open(const std::filesystem::path& path) {
  sqlite3* raw = nullptr;
  const int rc = sqlite3_open_v2(path.c_str(), &raw, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr);
  Store store(path, raw);
  if (rc != SQLITE_OK) throw Error("write failed", raw ? sqlite3_errmsg(raw) : "cannot open " + path.string());
  sqlite3* db = store.db_;

  exec_or_throw(db, "PRAGMA locking_mode = EXCLUSIVE");
  const int begin = exec(db, "BEGIN EXCLUSIVE");
  if (begin == SQLITE_BUSY || begin == SQLITE_LOCKED) throw Error("store locked", path.string());
  if (begin != SQLITE_OK) throw Error("store corrupt", sqlite3_errmsg(db));

  try {
    std::int64_t version = 0;
    std::int64_t tables = 0;
    {
      Statement v(db, "PRAGMA user_version");
      if (v.step()) version = v.int_col(0);
      Statement t(db, "SELECT count(*) FROM sqlite_master WHERE type = 'table'");
      if (t.step()) tables = t.int_col(0);
    }
    if (version == 0 && tables == 0) {
      exec_or_throw(db, kSchema);
      exec_or_throw(db, ("PRAGMA user_version = " + std::to_string(kStoreSchemaVersion)).c_str());
      Statement ins(db, "INSERT INTO tb_simulation (name, app_name) VALUES (?1, '')");
      ins.bind(1, kDefaultContext).run();
    } else if (version != kStoreSchemaVersion) {
      throw Error("schema mismatch", "user_version " + std::to_string(version));
    } else {
      exec_or_throw(db, kSchema);
    }
    if (exec(db, "COMMIT") != SQLITE_OK) throw Error("write failed", sqlite3_errmsg(db));
  } catch (const Error& e) {
    const int code = sqlite3_errcode(db);
    exec(db, "ROLLBACK");
    if (e.code() == "sql") {
      if (code == SQLITE_NOTADB || code == SQLITE_CORRUPT) throw Error("store corrupt", e.what());
      throw Error("write failed", e.what());
    }
    throw;
  }
  exec_or_throw(db, "PRAGMA foreign_keys = ON");
  return store;
}

std::vector<std::string> Store::list_contexts() const {
  std::vector<std::string> out;
  Statement s(db_, "SELECT name FROM tb_simulation ORDER BY id");
  while (s.step()) out.push_back(s.text_col(0));
  return out;
}

bool Store::has_context(std::string_view name) const { return context_id(db_, name).has_value(); }

std::vector<std::string> Store::table_names() const {
  std::vector<std::string> out;
  Statement s(db_, "SELECT name FROM sqlite_master WHERE type = 'table' ORDER BY name");
  while (s.step()) out.push_back(s.text_col(0));
  return out;
}

void Store::save_collection(const WidgetCollection& coll) {
  if (const auto violations = validate_collection(coll); !violations.empty())
    throw Error("invalid collection", violations.front().record + " " + violations.front().rule);

  with_transaction(db_, [&] {
    auto id = context_id(db_, coll.context.name);
    if (!id) {
      Statement ins(db_, "INSERT INTO tb_simulation (name, app_name) VALUES (?1, ?2)");
      ins.bind(1, coll.context.name).bind(2, coll.context.app_name).run();
      id = sqlite3_last_insert_rowid(db_);
    } else {
      Statement upd(db_, "UPDATE tb_simulation SET app_name = ?2 WHERE id = ?1");
      upd.bind(1, *id).bind(2, coll.context.app_name).run();
    }
    for (const char* table : {"tb_parameter", "tb_dataarray", "tb_parameterwidget", "tb_datawidget", "tb_commentwidget"}) {
      Statement del(db_, (std::string("DELETE FROM ") + table + " WHERE sim_id = ?1").c_str());
      del.bind(1, *id).run();
    }

    Statement p(db_, "INSERT INTO tb_parameter (sim_id, name, kind, value, list_index) VALUES (?1, ?2, ?3, ?4, ?5)");
    for (const auto& def : coll.parameters)
      p.bind(1, *id).bind(2, def.name).bind(3, to_string(def.kind)).bind(4, value_to_text(def.value)).bind(5, def.list_index).run();

    Statement d(db_, "INSERT INTO tb_dataarray (sim_id, name, kind) VALUES (?1, ?2, ?3)");
    for (const auto& def : coll.data) d.bind(1, *id).bind(2, def.name).bind(3, to_string(def.kind)).run();

    Statement pw(db_,
                 "INSERT INTO tb_parameterwidget (sim_id, kind, name, x, y, config, target, list_index) "
                 "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)");
    for (const auto& w : coll.pwidgets)
      pw.bind(1, *id)
          .bind(2, to_string(w.kind()))
          .bind(3, w.name)
          .bind(4, w.geometry.x)
          .bind(5, w.geometry.y)
          .bind(6, config_to_json(w.config).dump())
          .bind(7, w.target)
          .bind(8, w.list_index)
          .run();

    Statement dw(db_,
                 "INSERT INTO tb_datawidget (sim_id, kind, name, x, y, config, target) "
                 "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)");
    for (const auto& w : coll.dwidgets)
      dw.bind(1, *id)
          .bind(2, to_string(w.kind()))
          .bind(3, w.name)
          .bind(4, w.geometry.x)
          .bind(5, w.geometry.y)
          .bind(6, config_to_json(w.config).dump())
          .bind(7, w.target)
          .run();

    Statement cw(db_, "INSERT INTO tb_commentwidget (sim_id, name, x, y, body) VALUES (?1, ?2, ?3, ?4, ?5)");
    for (const auto& w : coll.comments)
      cw.bind(1, *id).bind(2, w.name).bind(3, w.geometry.x).bind(4, w.geometry.y).bind(5, w.body).run();
  });
}

WidgetCollection Store::load_collection(std::string_view context_name) const {
  const auto id = context_id(db_, context_name);
  if (!id) throw Error("no such context", std::string(context_name));
  WidgetCollection c;
  {
    Statement s(db_, "SELECT name, app_name FROM tb_simulation WHERE id = ?1");
    s.bind(1, *id);
    if (s.step()) c.context = {s.text_col(0), s.text_col(1)};
  }
  try {
    Statement s(db_, "SELECT name, kind, value, list_index FROM tb_parameter WHERE sim_id = ?1 ORDER BY id");
    s.bind(1, *id);
    while (s.step()) {
      const auto kind = param_kind_from_string(s.text_col(1));
      if (!kind) throw Error("store corrupt", "parameter kind " + s.text_col(1));
      c.parameters.push_back({s.text_col(0), *kind, value_from_text(*kind, s.text_col(2)), static_cast<int>(s.int_col(3))});
    }
  } catch (const Error& e) {
    if (e.code() == "bad value") throw Error("store corrupt", e.what());
    throw;
  }
  {
    Statement s(db_, "SELECT name, kind FROM tb_dataarray WHERE sim_id = ?1 ORDER BY id");
    s.bind(1, *id);
    while (s.step()) {
      const auto kind = data_kind_from_string(s.text_col(1));
      if (!kind) throw Error("store corrupt", "data kind " + s.text_col(1));
      c.data.push_back({s.text_col(0), *kind});
    }
  }
  auto parse_config = [](const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("store corrupt", "config " + text);
    return j;
  };
  try {
    {
      Statement s(db_,
                  "SELECT kind, name, x, y, config, target, list_index FROM tb_parameterwidget WHERE sim_id = ?1 ORDER BY id");
      s.bind(1, *id);
      while (s.step()) {
        const auto kind = widget_kind_from_string(s.text_col(0));
        if (!kind) throw Error("store corrupt", "widget kind " + s.text_col(0));
        c.pwidgets.push_back({s.text_col(1),
                              {static_cast<int>(s.int_col(2)), static_cast<int>(s.int_col(3))},
                              param_config_from_json(*kind, parse_config(s.text_col(4))),
                              s.text_col(5),
                              static_cast<int>(s.int_col(6))});
      }
    }
    {
      Statement s(db_, "SELECT kind, name, x, y, config, target FROM tb_datawidget WHERE sim_id = ?1 ORDER BY id");
      s.bind(1, *id);
      while (s.step()) {
        const auto kind = widget_kind_from_string(s.text_col(0));
        if (!kind) throw Error("store corrupt", "widget kind " + s.text_col(0));
        c.dwidgets.push_back({s.text_col(1),
                              {static_cast<int>(s.int_col(2)), static_cast<int>(s.int_col(3))},
                              data_config_from_json(*kind, parse_config(s.text_col(4))),
                              s.text_col(5)});
      }
    }
  } catch (const Error& e) {
    if (e.code() == "bad config") throw Error("store corrupt", e.what());
    throw;
  }
  {
    Statement s(db_, "SELECT name, x, y, body FROM tb_commentwidget WHERE sim_id = ?1 ORDER BY id");
    s.bind(1, *id);
    while (s.step())
      c.comments.push_back(
          {s.text_col(0), {static_cast<int>(s.int_col(1)), static_cast<int>(s.int_col(2))}, s.text_col(3)});
  }
  return c;
}

void Store::copy_context(std::string_view src, std::string_view dst) {
  const auto src_id = context_id(db_, src);
  if (!src_id) throw Error("no such context", std::string(src));
  if (context_id(db_, dst)) throw Error("context exists", std::string(dst));
  if (dst.empty()) throw Error("invalid collection", "empty context name");

  with_transaction(db_, [&] {
    {
      Statement ins(db_, "INSERT INTO tb_simulation (name, app_name) SELECT ?2, app_name FROM tb_simulation WHERE id = ?1");
      ins.bind(1, *src_id).bind(2, dst).run();
    }
    const std::int64_t dst_id = sqlite3_last_insert_rowid(db_);
    const char* copies[] = {
        "INSERT INTO tb_parameter (sim_id, name, kind, value, list_index) "
        "SELECT ?2, name, kind, value, list_index FROM tb_parameter WHERE sim_id = ?1 ORDER BY id",
        "INSERT INTO tb_dataarray (sim_id, name, kind) "
        "SELECT ?2, name, kind FROM tb_dataarray WHERE sim_id = ?1 ORDER BY id",
        "INSERT INTO tb_parameterwidget (sim_id, kind, name, x, y, config, target, list_index) "
        "SELECT ?2, kind, name, x, y, config, target, list_index FROM tb_parameterwidget WHERE sim_id = ?1 ORDER BY id",
        "INSERT INTO tb_datawidget (sim_id, kind, name, x, y, config, target) "
        "SELECT ?2, kind, name, x, y, config, target FROM tb_datawidget WHERE sim_id = ?1 ORDER BY id",
        "INSERT INTO tb_commentwidget (sim_id, name, x, y, body) "
        "SELECT ?2, name, x, y, body FROM tb_commentwidget WHERE sim_id = ?1 ORDER BY id",
    };
    for (const char* sql : copies) {
      Statement s(db_, sql);
      s.bind(1, *src_id).bind(2, dst_id).run();
    }
  });
}

}  // namespace simdeck
