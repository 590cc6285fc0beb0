#include "iotsql/store/schema.hpp"

#include <set>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "embedded_data.hpp"

namespace iotsql::store {

std::optional<std::size_t> TableSchema::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (iequals(columns[i].name, column)) return i;
  }
  return std::nullopt;
}

std::string sql_table_name(std::string_view schema_name) {
  std::string out = to_upper(schema_name);
  for (char& c : out) {
    if (c == '.') c = '_';
  }
  return out;
}

std::string table_key(std::string_view name) {
  std::string out = to_lower(name);
  for (char& c : out) {
    if (c == '.') c = '_';
  }
  return out;
}

DatabaseSchema DatabaseSchema::define(std::vector<TableSchema> tables) {
  if (tables.empty()) throw Error(Errc::kEmptySchema, "schema has no tables");
  std::set<std::string> table_keys;
  for (const auto& t : tables) {
    if (t.name.empty()) throw Error(Errc::kEmptySchema, "table with empty name");
    if (!table_keys.insert(table_key(t.name)).second) {
      throw Error(Errc::kDuplicateTable, t.name);
    }
    if (t.columns.empty()) {
      throw Error(Errc::kEmptySchema, "table " + t.name + " has no columns");
    }
    std::set<std::string> column_keys;
    for (const auto& c : t.columns) {
      if (c.name.empty()) throw Error(Errc::kEmptySchema, "empty column name in " + t.name);
      if (!column_keys.insert(to_lower(c.name)).second) {
        throw Error(Errc::kDuplicateColumn, t.name + "." + c.name);
      }
    }
  }
  DatabaseSchema schema;
  schema.tables_ = std::move(tables);
  return schema;
}

std::size_t DatabaseSchema::column_count() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.columns.size();
  return n;
}

std::optional<std::size_t> DatabaseSchema::find_table(std::string_view name) const {
  const std::string key = table_key(name);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (table_key(tables_[i].name) == key) return i;
  }
  return std::nullopt;
}

LinearizedSchema linearize_schema(const DatabaseSchema& schema) {
  LinearizedSchema out;
  out.tokens.reserve(1 + schema.tables().size() + 2 * schema.column_count());
  out.tokens.emplace_back("*");
  for (const auto& t : schema.tables()) {
    out.tokens.push_back(t.name);
    for (const auto& c : t.columns) {
      out.tokens.push_back(c.name);
      out.tokens.emplace_back(attribute_name(c.attribute));
    }
  }
  return out;
}

DatabaseSchema parse_schema(std::string_view text) {
  std::vector<TableSchema> tables;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, "\n")) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto words = split_whitespace(trim(line));
    if (words.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (words[0] == "table") {
      if (words.size() != 2) throw Error(Errc::kParseError, "expected 'table <name>'" + where);
      tables.push_back(TableSchema{words[1], {}});
    } else if (words[0] == "column") {
      if (words.size() != 3) {
        throw Error(Errc::kParseError, "expected 'column <name> <attribute>'" + where);
      }
      if (tables.empty()) throw Error(Errc::kParseError, "column before any table" + where);
      auto attr = parse_attribute(words[2]);
      if (!attr) throw Error(Errc::kParseError, "unknown attribute '" + words[2] + "'" + where);
      tables.back().columns.push_back(ColumnDef{words[1], *attr});
    } else {
      throw Error(Errc::kParseError, "unexpected '" + words[0] + "'" + where);
    }
  }
  return DatabaseSchema::define(std::move(tables));
}

std::string format_schema(const DatabaseSchema& schema) {
  std::string out;
  for (const auto& t : schema.tables()) {
    out += "table " + t.name + "\n";
    for (const auto& c : t.columns) {
      out += "  column " + c.name + " " + std::string(attribute_name(c.attribute)) + "\n";
    }
  }
  return out;
}

std::string_view default_schema_text() { return embedded::kDefaultSchema; }

const DatabaseSchema& default_schema() {
  static const DatabaseSchema schema = parse_schema(default_schema_text());
  return schema;
}

}  // namespace iotsql::store
