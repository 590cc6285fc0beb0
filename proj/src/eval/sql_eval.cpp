#include <algorithm>
#include <set>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/eval/eval.hpp"
#include "iotsql/store/sql.hpp"

namespace iotsql::eval {

namespace {

std::string quote_literal(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

}  // namespace

std::string normalize_sql(std::string_view sql) {
  std::vector<store::sql::Token> toks;
  try {
    toks = store::sql::tokenize(sql);
  } catch (const Error&) {
    return join(split_whitespace(sql), " ");
  }
  while (!toks.empty() && toks.back().kind == store::sql::TokenKind::kEnd) toks.pop_back();
  if (!toks.empty() && toks.back().kind == store::sql::TokenKind::kSymbol && toks.back().text == ";") toks.pop_back();
  std::vector<std::string> parts;
  parts.reserve(toks.size());
  for (const auto& t : toks) {
    switch (t.kind) {
      case store::sql::TokenKind::kString: parts.push_back(quote_literal(t.text)); break;
      case store::sql::TokenKind::kIdentifier: parts.push_back(to_lower(t.text)); break;
      case store::sql::TokenKind::kSymbol: parts.push_back(t.text == "<>" ? "!=" : t.text); break;
      default: parts.push_back(t.text); break;
    }
  }
  return join(parts, " ");
}

bool logical_accuracy(std::string_view pred_sql, std::string_view gold_sql) {
  return normalize_sql(pred_sql) == normalize_sql(gold_sql);
}

namespace {

bool row_less(const store::Row& a, const store::Row& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    const int c = store::order_compare(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

bool rows_equal(const store::Row& a, const store::Row& b, double rel_tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!store::result_equal(a[i], b[i], rel_tol)) return false;
  }
  return true;
}

}  // namespace

bool results_match(const store::ResultTable& pred, const store::ResultTable& gold, bool ordered, double rel_tol) {
  if (pred.columns.size() != gold.columns.size() || pred.rows.size() != gold.rows.size()) return false;
  if (ordered) {
    for (std::size_t i = 0; i < gold.rows.size(); ++i) {
      if (!rows_equal(pred.rows[i], gold.rows[i], rel_tol)) return false;
    }
    return true;
  }
  auto p = pred.rows;
  auto g = gold.rows;
  std::sort(p.begin(), p.end(), row_less);
  std::sort(g.begin(), g.end(), row_less);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!rows_equal(p[i], g[i], rel_tol)) return false;
  }
  return true;
}

namespace {

store::ResultTable run_gold(std::string_view gold_sql, const store::Database& db, const SqlEvalOptions& options) {
  try {
    return db.execute(gold_sql, store::ExecOptions{options.timeout});
  } catch (const Error& e) {
    throw Error(Errc::kGoldExecutionError, std::string(gold_sql) + ": " + e.what());
  }
}

// Empty string when the prediction matches, else the reason.
std::string execution_verdict(std::string_view pred_sql, const store::ResultTable& gold, const store::Database& db,
                              const SqlEvalOptions& options) {
  store::ResultTable pred;
  try {
    pred = db.execute(pred_sql, store::ExecOptions{options.timeout});
  } catch (const Error& e) {
    return std::string("prediction failed: ") + e.what();
  }
  if (!results_match(pred, gold, gold.ordered, options.rel_tol)) return "result differs";
  return {};
}

}  // namespace

bool execution_accuracy(std::string_view pred_sql, std::string_view gold_sql, const store::Database& db,
                        const SqlEvalOptions& options) {
  const auto gold = run_gold(gold_sql, db, options);
  return execution_verdict(pred_sql, gold, db, options).empty();
}

SqlEvalReport score_sql_corpus(const std::vector<modelio::SqlExample>& examples,
                               const std::vector<modelio::PredictionRecord>& predictions, const store::Database& db,
                               const SqlEvalOptions& options) {
  std::map<std::string, const modelio::PredictionRecord*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) throw Error(Errc::kDuplicateId, "prediction '" + p.id + "'");
  }
  std::set<std::string> example_ids;
  for (const auto& e : examples) {
    example_ids.insert(e.id);
    if (!by_id.count(e.id)) throw Error(Errc::kMissingPrediction, "no prediction for '" + e.id + "'");
  }
  for (const auto& p : predictions) {
    if (!example_ids.count(p.id)) throw Error(Errc::kUnknownId, "prediction '" + p.id + "' matches no example");
  }
  SqlEvalReport r;
  r.options = options;
  r.n = examples.size();
  for (const auto& e : examples) {
    const std::string& pred = by_id.at(e.id)->payload;
    const auto gold = run_gold(e.gold_sql, db, options);
    const bool logical = logical_accuracy(pred, e.gold_sql);
    const std::string why = execution_verdict(pred, gold, db, options);
    const bool exec = why.empty();
    r.execution_correct += exec;
    r.logical_correct += logical;
    std::vector<std::string> tables;
    try {
      tables = db.referenced_tables(e.gold_sql);
    } catch (const Error& err) {
      throw Error(Errc::kGoldExecutionError, e.gold_sql + ": " + err.what());
    }
    for (const auto& t : tables) {
      auto& ts = r.per_table[t];
      ++ts.n;
      ts.execution_correct += exec;
      ts.logical_correct += logical;
    }
    if (!exec) {
      r.failures.push_back({e.id, why});
    } else if (!logical) {
      r.failures.push_back({e.id, "not an exact match"});
    }
  }
  if (r.n) {
    r.execution_acc = static_cast<double>(r.execution_correct) / static_cast<double>(r.n);
    r.logical_acc = static_cast<double>(r.logical_correct) / static_cast<double>(r.n);
  }
  return r;
}

}  // namespace iotsql::eval
