#pragma once

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/common/error.hpp"
#include "iotsql/ingest/records.hpp"

namespace iotsql::ingest {

enum class LogKind { kConn, kDns, kHttp, kFiles, kNtp, kWeird };

inline constexpr std::array<LogKind, 6> kAllLogKinds = {LogKind::kConn, LogKind::kDns,  LogKind::kHttp,
                                                        LogKind::kFiles, LogKind::kNtp, LogKind::kWeird};

// "conn", "dns", ... ; the table is "<name>.log".
std::string_view log_kind_name(LogKind kind);
// Accepts "conn", "conn.log", "CONN". Throws UnknownKind.
LogKind parse_log_kind(std::string_view name);

// Zeek field names for a kind in schema order (connection id fields as id.orig_h etc.).
std::vector<std::string> zeek_field_names(LogKind kind);

// A cell: nullopt = unset ("-"), "" = empty collection ("(empty)").
using Field = std::optional<std::string>;

struct LineError {
  std::size_t line = 0;
  Errc code = Errc::kParseError;
  std::string message;
};

struct ParsedLog {
  LogKind kind = LogKind::kConn;
  std::vector<std::string> fields;       // as named in the input
  std::vector<std::vector<Field>> rows;  // aligned with fields
  std::vector<std::size_t> row_lines;    // source line of each row
  // Typed records for kConn; one per accepted row.
  std::vector<ConnRecord> conn;
  std::vector<LineError> errors;

  // Index of a field by name; "orig_h" also matches "id.orig_h".
  std::optional<std::size_t> field_index(std::string_view name) const;
};

// Parses Zeek TSV (directive headers) or line-delimited JSON. Malformed lines
// are collected in `errors`; a TSV data line before #fields throws
// MissingFieldsHeader.
ParsedLog parse_zeek(std::istream& in, LogKind kind);
ParsedLog parse_zeek(std::string_view text, LogKind kind);

// Zeek TSV writer. `open_time` fills the #open/#close directives so that
// output is a pure function of its inputs.
void write_zeek_tsv(std::ostream& out, const ParsedLog& log, Micros open_time);

// Labeled conn.log (IoT-23 layout: label and detailed-label trailing columns).
void write_conn_log(std::ostream& out, const std::vector<ConnRecord>& records, Micros open_time);

// Generic rows for a kind in zeek_field_names order, e.g. for synthesized logs.
ParsedLog make_log(LogKind kind, std::vector<std::vector<Field>> rows);

}  // namespace iotsql::ingest
