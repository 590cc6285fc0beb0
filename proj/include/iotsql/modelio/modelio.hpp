#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/ingest/records.hpp"
#include "iotsql/store/schema.hpp"

namespace iotsql::modelio {

inline constexpr std::string_view kSqlSeparator = " | ";
inline constexpr std::string_view kDetectionPrompt = "Is the following network information Malicious?";

struct SqlExample {
  std::string id;
  std::string input;
  std::string gold_sql;
};

// question + separator + schema tokens joined by ", ". Throws EmptyQuestion.
std::string build_sql_input(std::string_view question, const store::LinearizedSchema& schema,
                            std::string_view separator = kSqlSeparator);

// The 19 conn.log columns of the detection row: every column except ts and uid.
inline constexpr std::array<std::string_view, 19> kDetectionColumns = {
    "orig_h",     "orig_p",     "resp_h",       "resp_p",         "proto",     "service",      "duration",
    "orig_bytes", "resp_bytes", "conn_state",   "local_orig",     "local_resp", "missed_bytes", "history",
    "orig_pkts",  "orig_ip_bytes", "resp_pkts", "resp_ip_bytes", "tunnel_parents"};

struct DetectionExample {
  std::string id;
  std::string instruction;
  std::string row;
  std::string input;  // instruction + " " + row
  bool gold = false;
};

// Values in column order, "-" for unset, separated by single spaces.
std::string detection_row(const ingest::ConnRecord& r);
DetectionExample build_detection_input(const ingest::ConnRecord& r, std::string id = {},
                                       std::string_view instruction = kDetectionPrompt);

std::string_view label_payload(bool malicious);  // "Malicious" / "Benign"
// Case-insensitive "Malicious"/"Benign". Throws ParseError.
bool parse_label_payload(std::string_view payload);

// JSON lines: {"id", "input", "gold"}; detection gold is "Malicious"/"Benign".
void write_sql_examples(std::ostream& out, const std::vector<SqlExample>& examples);
std::vector<SqlExample> read_sql_examples(std::istream& in);
void write_detection_examples(std::ostream& out, const std::vector<DetectionExample>& examples);
std::vector<DetectionExample> read_detection_examples(std::istream& in);

enum class PredictionKind { kSql, kDetection };

struct PredictionRecord {
  std::string id;
  std::string payload;
};

// JSON lines {"id", "payload"}. Throws ParseError, MissingId, DuplicateId;
// detection payloads must be labels.
std::vector<PredictionRecord> read_predictions(std::istream& in, PredictionKind kind);
void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& preds);

}  // namespace iotsql::modelio
