#include "iotsql/store/database.hpp"

#include <fstream>
#include <sstream>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::store {

Database::Database(DatabaseSchema schema)
    : schema_(std::move(schema)), data_(schema_.tables().size()) {}

std::size_t Database::load_records(std::string_view table, std::vector<Row> rows) {
  auto idx = schema_.find_table(table);
  if (!idx) throw Error(Errc::kUnknownTable, std::string(table));
  const TableSchema& ts = schema_.tables()[*idx];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.size() != ts.columns.size()) {
      throw Error(Errc::kArityMismatch, ts.name + " row " + std::to_string(r) + " has " +
                                            std::to_string(row.size()) + " values, expected " +
                                            std::to_string(ts.columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      auto attr = row[c].attribute();
      if (attr && *attr != ts.columns[c].attribute) {
        throw Error(Errc::kTypeMismatch, ts.name + "." + ts.columns[c].name + " expects " +
                                             std::string(attribute_name(ts.columns[c].attribute)) +
                                             ", got " + std::string(attribute_name(*attr)));
      }
    }
  }
  auto& dest = data_[*idx];
  dest.reserve(dest.size() + rows.size());
  for (auto& row : rows) dest.push_back(std::move(row));
  return rows.size();
}

std::size_t Database::row_count(std::string_view table) const {
  auto idx = schema_.find_table(table);
  if (!idx) throw Error(Errc::kUnknownTable, std::string(table));
  return data_[*idx].size();
}

namespace {

std::string escape_cell(const Value& v) {
  if (v.is_null()) return "\\N";
  std::string text = render(v);
  if (v.is_double() && text.find_first_of(".eEn") == std::string::npos) text += ".0";
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> unescape_cell(std::string_view s) {
  if (s == "\\N") return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char n = s[++i];
      out += n == 't' ? '\t' : n == 'n' ? '\n' : n == 'r' ? '\r' : n;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

void Database::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "schema.txt", std::ios::binary);
    if (!out) throw Error(Errc::kIo, "cannot write " + (dir / "schema.txt").string());
    out << format_schema(schema_);
  }
  for (std::size_t t = 0; t < schema_.tables().size(); ++t) {
    const auto& ts = schema_.tables()[t];
    std::ofstream out(dir / (ts.name + ".tsv"), std::ios::binary);
    if (!out) throw Error(Errc::kIo, "cannot write table " + ts.name);
    for (std::size_t c = 0; c < ts.columns.size(); ++c) out << (c ? "\t" : "") << ts.columns[c].name;
    out << '\n';
    for (const auto& row : data_[t]) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << escape_cell(row[c]);
      out << '\n';
    }
  }
}

Database Database::load(const std::filesystem::path& dir) {
  std::ifstream schema_in(dir / "schema.txt", std::ios::binary);
  if (!schema_in) throw Error(Errc::kIo, "no schema.txt in " + dir.string());
  std::stringstream buf;
  buf << schema_in.rdbuf();
  Database db(parse_schema(buf.str()));
  for (std::size_t t = 0; t < db.schema_.tables().size(); ++t) {
    const auto& ts = db.schema_.tables()[t];
    std::ifstream in(dir / (ts.name + ".tsv"), std::ios::binary);
    if (!in) continue;
    std::string line;
    std::getline(in, line);
    std::size_t line_no = 1;
    std::vector<Row> rows;
    while (std::getline(in, line)) {
      ++line_no;
      auto cells = split(line, "\t");
      if (cells.size() != ts.columns.size()) {
        throw Error(Errc::kArityMismatch, ts.name + ".tsv line " + std::to_string(line_no));
      }
      Row row;
      row.reserve(cells.size());
      for (std::size_t c = 0; c < cells.size(); ++c) {
        auto text = unescape_cell(cells[c]);
        if (!text) {
          row.emplace_back();
          continue;
        }
        auto v = parse_value(*text, ts.columns[c].attribute);
        if (!v) {
          throw Error(Errc::kTypeMismatch, ts.name + ".tsv line " + std::to_string(line_no) + " column " +
                                               ts.columns[c].name);
        }
        row.push_back(std::move(*v));
      }
      rows.push_back(std::move(row));
    }
    db.load_records(ts.name, std::move(rows));
  }
  return db;
}

}  // namespace iotsql::store
