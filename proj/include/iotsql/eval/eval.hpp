#pragma once

#include <array>
#include <chrono>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/modelio/modelio.hpp"
#include "iotsql/store/database.hpp"

namespace iotsql::eval {

struct SqlEvalOptions {
  double rel_tol = 1e-6;
  std::chrono::milliseconds timeout{5000};
};

// Token-level normal form: keywords and identifiers lower-cased, literals
// kept verbatim, one space between tokens. Unlexable input falls back to
// whitespace collapsing.
std::string normalize_sql(std::string_view sql);

bool logical_accuracy(std::string_view pred_sql, std::string_view gold_sql);

// Positional column comparison over row multisets; row sequences when the
// gold result is ordered. Column names are ignored.
bool results_match(const store::ResultTable& pred, const store::ResultTable& gold, bool ordered, double rel_tol);

// Throws GoldExecutionError when the gold query fails.
bool execution_accuracy(std::string_view pred_sql, std::string_view gold_sql, const store::Database& db,
                        const SqlEvalOptions& options = {});

struct TableScore {
  std::size_t n = 0;
  std::size_t execution_correct = 0;
  std::size_t logical_correct = 0;
  double execution_acc() const { return n ? static_cast<double>(execution_correct) / static_cast<double>(n) : 0.0; }
  double logical_acc() const { return n ? static_cast<double>(logical_correct) / static_cast<double>(n) : 0.0; }
};

struct Failure {
  std::string id;
  std::string reason;
};

struct SqlEvalReport {
  std::size_t n = 0;
  std::size_t execution_correct = 0;
  std::size_t logical_correct = 0;
  double execution_acc = 0.0;
  double logical_acc = 0.0;
  std::map<std::string, TableScore> per_table;
  std::vector<Failure> failures;
  SqlEvalOptions options;
};

// Throws MissingPrediction, UnknownId, GoldExecutionError.
SqlEvalReport score_sql_corpus(const std::vector<modelio::SqlExample>& examples,
                               const std::vector<modelio::PredictionRecord>& predictions, const store::Database& db,
                               const SqlEvalOptions& options = {});

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct DetectionReport {
  std::size_t n = 0;
  // confusion[gold][pred], index 1 = malicious.
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  ClassScore benign;
  ClassScore malicious;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

// Throws LengthMismatch, Empty.
DetectionReport detection_metrics(const std::vector<bool>& golds, const std::vector<bool>& preds);

// Aligns predictions to examples by id. Throws MissingPrediction, UnknownId.
DetectionReport score_detection(const std::vector<modelio::DetectionExample>& examples,
                                const std::vector<modelio::PredictionRecord>& predictions);

std::string to_json(const SqlEvalReport& r);
std::string to_json(const DetectionReport& r);
std::string to_text(const SqlEvalReport& r);
std::string to_text(const DetectionReport& r);

}  // namespace iotsql::eval
