#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/store/schema.hpp"
#include "iotsql/store/value.hpp"

namespace iotsql::store {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  // True when the query had ORDER BY, i.e. row order is meaningful.
  bool ordered = false;
};

struct ExecOptions {
  std::chrono::milliseconds timeout{5000};
  // Relative tolerance for float comparisons inside predicates.
  double float_rel_tol = 1e-9;
};

// In-memory relational store. Loading is single-writer; execute() is const
// and may be called concurrently once loading is done.
class Database {
 public:
  explicit Database(DatabaseSchema schema);

  const DatabaseSchema& schema() const { return schema_; }

  // Appends typed rows. Throws UnknownTable, ArityMismatch, TypeMismatch; on
  // error nothing is inserted.
  std::size_t load_records(std::string_view table, std::vector<Row> rows);

  const std::vector<Row>& rows(std::size_t table_index) const { return data_[table_index]; }
  std::size_t row_count(std::string_view table) const;

  // Throws ParseError, UnknownIdentifier, TypeMismatch or Timeout.
  ResultTable execute(std::string_view query, const ExecOptions& options = {}) const;

  // Schema names of every table the query mentions, sorted and unique.
  // Throws ParseError or UnknownTable.
  std::vector<std::string> referenced_tables(std::string_view query) const;

  // Snapshot directory: schema.txt plus one <table>.tsv per table.
  void save(const std::filesystem::path& dir) const;
  static Database load(const std::filesystem::path& dir);

 private:
  DatabaseSchema schema_;
  std::vector<std::vector<Row>> data_;
};

}  // namespace iotsql::store
