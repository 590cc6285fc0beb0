#include "iotsql/templates/corpus_io.hpp"

#include <cstdio>
#include <set>
#include <string>

#include "iotsql/common/error.hpp"
#include "json.hpp"

namespace iotsql::templates {

using json = nlohmann::ordered_json;

void write_corpus(std::ostream& out, const std::vector<TextSqlPair>& pairs) {
  for (const auto& p : pairs) {
    json j;
    j["id"] = p.id;
    j["question"] = p.question;
    j["sql"] = p.sql;
    j["template_id"] = p.template_id ? json(*p.template_id) : json(nullptr);
    j["category"] = p.category ? json(std::string(category_name(*p.category))) : json(nullptr);
    j["tables_referenced"] = p.tables_referenced;
    out << j.dump() << '\n';
  }
}

namespace {

json parse_line(const std::string& line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": not an object");
    return j;
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::string required_string(const json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": missing string '" + key + "'");
  }
  return it->get<std::string>();
}

std::optional<Category> optional_category(const json& j, std::size_t line_no) {
  auto it = j.find("category");
  if (it == j.end() || it->is_null()) return std::nullopt;
  auto c = it->is_string() ? parse_category(it->get<std::string>()) : std::nullopt;
  if (!c) throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": bad category");
  return c;
}

}  // namespace

std::vector<TextSqlPair> read_corpus(std::istream& in) {
  std::vector<TextSqlPair> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_line(line, line_no);
    TextSqlPair p;
    p.id = required_string(j, "id", line_no);
    p.question = required_string(j, "question", line_no);
    p.sql = required_string(j, "sql", line_no);
    if (auto it = j.find("template_id"); it != j.end() && it->is_string()) p.template_id = it->get<std::string>();
    p.category = optional_category(j, line_no);
    if (auto it = j.find("tables_referenced"); it != j.end() && it->is_array()) {
      for (const auto& t : *it) p.tables_referenced.push_back(t.get<std::string>());
    }
    if (!ids.insert(p.id).second) throw Error(Errc::kDuplicateId, "'" + p.id + "' at line " + std::to_string(line_no));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TextSqlPair> read_manual_pairs(std::istream& in, const store::Database& db) {
  std::vector<TextSqlPair> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_line(line, line_no);
    TextSqlPair p;
    p.question = required_string(j, "question", line_no);
    p.sql = required_string(j, "sql", line_no);
    p.category = optional_category(j, line_no);
    if (auto it = j.find("id"); it != j.end() && it->is_string()) {
      p.id = it->get<std::string>();
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "m%05zu", out.size());
      p.id = buf;
    }
    if (!ids.insert(p.id).second) throw Error(Errc::kDuplicateId, "'" + p.id + "' at line " + std::to_string(line_no));
    try {
      db.execute(p.sql);
      p.tables_referenced = db.referenced_tables(p.sql);
    } catch (const Error& e) {
      throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": sql does not execute: " + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace iotsql::templates
