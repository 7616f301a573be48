#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simdeck/model.hpp"

struct sqlite3;

namespace simdeck {

/// Table names of the on-disk schema, in creation order.
inline constexpr std::string_view kStoreTables[] = {"tb_simulation",       "tb_parameter",   "tb_dataarray",
                                                    "tb_parameterwidget", "tb_datawidget", "tb_commentwidget"};

inline constexpr int kStoreSchemaVersion = 1;

/// `<source without last extension>.db` unless an explicit path is given.
std::filesystem::path default_db_path(const std::filesystem::path& app_source_path,
                                      const std::optional<std::filesystem::path>& cli_arg = std::nullopt);

/// Single-file SQLite store of simulation contexts and their widget
/// collections. The file is held under an exclusive lock while open, so a
/// second host on the same file fails with "store locked".
///
/// Errors: "store corrupt", "schema mismatch", "store locked",
/// "write failed", "no such context", "context exists", "invalid collection".
class Store {
 public:
  static Store open(const std::filesystem::path& path);

  Store(Store&&) noexcept;
  Store& operator=(Store&&) noexcept;
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;
  ~Store();

  const std::filesystem::path& path() const { return path_; }

  std::vector<std::string> list_contexts() const;
  bool has_context(std::string_view name) const;

  /// Replaces every row of coll.context atomically; creates the context row
  /// when missing. The collection must validate cleanly.
  void save_collection(const WidgetCollection& coll);
  WidgetCollection load_collection(std::string_view context_name) const;
  void copy_context(std::string_view src, std::string_view dst);

  /// Names of all user tables, sorted (inspection aid for tests and tools).
  std::vector<std::string> table_names() const;

 private:
  Store(std::filesystem::path path, sqlite3* db);
  void close() noexcept;

  std::filesystem::path path_;
  sqlite3* db_ = nullptr;
};

}  // namespace simdeck
