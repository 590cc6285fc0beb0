#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/store/value.hpp"

namespace iotsql::store {

struct ColumnDef {
  std::string name;
  Attribute attribute = Attribute::kText;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnDef> columns;

  // Case-insensitive column lookup.
  std::optional<std::size_t> column_index(std::string_view column) const;
};

// Name under which a table is addressed in SQL: "conn.log" -> "CONN_LOG".
std::string sql_table_name(std::string_view schema_name);

// Lookup key for table identifiers: case-folded, '.' treated as '_'.
std::string table_key(std::string_view name);

class DatabaseSchema {
 public:
  DatabaseSchema() = default;

  // Validates and builds a schema. Throws EmptySchema, DuplicateTable,
  // DuplicateColumn (also for tables without columns).
  static DatabaseSchema define(std::vector<TableSchema> tables);

  const std::vector<TableSchema>& tables() const { return tables_; }
  std::size_t column_count() const;

  // Resolves either the schema name ("conn.log") or its SQL form ("CONN_LOG").
  std::optional<std::size_t> find_table(std::string_view name) const;

 private:
  std::vector<TableSchema> tables_;
};

struct LinearizedSchema {
  std::vector<std::string> tokens;
};

// ["*", t1, c11, a11, c12, a12, ..., t2, ...].
LinearizedSchema linearize_schema(const DatabaseSchema& schema);

// Line-oriented schema text:
//   # comment
//   table conn.log
//     column ts time
DatabaseSchema parse_schema(std::string_view text);
std::string format_schema(const DatabaseSchema& schema);

// 12 tables / 173 columns: six Zeek logs, five sensor tables, device inventory.
const DatabaseSchema& default_schema();
std::string_view default_schema_text();

}  // namespace iotsql::store
