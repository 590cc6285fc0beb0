#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iotsql/common/error.hpp"
#include "iotsql/common/rng.hpp"
#include "iotsql/ingest/records.hpp"
#include "iotsql/store/database.hpp"
#include "iotsql/store/schema.hpp"

namespace fixtures {

using iotsql::store::Database;
using iotsql::store::Row;
using iotsql::store::Value;

// Three-column table t(a number, b text, x number) plus s(a number, c text).
inline Database small_db(std::size_t rows = 3, std::uint64_t seed = 1) {
  Database db(iotsql::store::parse_schema(
      "table t\n  column a number\n  column b text\n  column x number\n"
      "table s\n  column a number\n  column c text\n"));
  if (rows == 3) {
    db.load_records("t", {Row{Value(1), Value("Ab"), Value(2.5)}, Row{Value(2), Value("ab"), Value(4.0)},
                          Row{Value(3), Value("cd"), Value(6.5)}});
    db.load_records("s", {Row{Value(1), Value("one")}, Row{Value(3), Value("three")}});
    return db;
  }
  iotsql::Rng rng(seed);
  const char* words[] = {"ab", "Ab", "cd", "ef", "gh"};
  std::vector<Row> t, s;
  for (std::size_t i = 0; i < rows; ++i) {
    t.push_back(Row{Value(static_cast<std::int64_t>(rng.between(0, 9))), Value(words[rng.below(5)]),
                    Value(static_cast<double>(rng.between(0, 400)) / 4.0)});
  }
  for (std::int64_t a = 0; a < 10; a += 2) s.push_back(Row{Value(a), Value(words[a % 5])});
  db.load_records("t", t);
  db.load_records("s", s);
  return db;
}

inline iotsql::ingest::ConnRecord scan_record() {
  iotsql::ingest::ConnRecord r;
  r.ts = 1545730073000000;
  r.uid = "CrDn63WjJEmrWGjqf";
  r.orig_h = "192.168.1.1";
  r.orig_p = 80;
  r.resp_h = "192.161.2.2";
  r.resp_p = 8080;
  r.proto = "tcp";
  r.conn_state = "S0";
  r.history = "S";
  r.orig_pkts = 1;
  r.orig_ip_bytes = 40;
  r.label = iotsql::ingest::AttackLabel::kPartOfAHorizontalPortScan;
  r.is_malicious = true;
  return r;
}

// Error code thrown by f, or nullopt when it returns normally.
inline std::optional<iotsql::Errc> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const iotsql::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("iotsql_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures
