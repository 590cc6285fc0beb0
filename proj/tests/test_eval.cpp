#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/eval/eval.hpp"
#include "iotsql/ingest/loader.hpp"
#include "iotsql/templates/generator.hpp"

using namespace iotsql;
using fixtures::code_of;
using namespace iotsql::eval;

namespace {


std::vector<modelio::SqlExample> examples(const std::vector<std::string>& sqls) {
  std::vector<modelio::SqlExample> out;
  for (std::size_t i = 0; i < sqls.size(); ++i) out.push_back({"e" + std::to_string(i), "q", sqls[i]});
  return out;
}

std::vector<modelio::PredictionRecord> echo(const std::vector<modelio::SqlExample>& ex) {
  std::vector<modelio::PredictionRecord> out;
  for (const auto& e : ex) out.push_back({e.id, e.gold_sql});
  return out;
}

}  // namespace

TEST_CASE("logical accuracy normalization") {
  CHECK(logical_accuracy("select A from T", "SELECT a FROM t"));
  CHECK_FALSE(logical_accuracy("SELECT a FROM t", "SELECT a FROM t WHERE x=1"));
  CHECK(logical_accuracy("SELECT a,b FROM t WHERE ( x=1 )", "SELECT a , b FROM t WHERE (x = 1)"));
  CHECK(logical_accuracy("SELECT   a\n FROM t", "SELECT a FROM t"));
  const std::string p = "SELECT * FROM t WHERE b = 'Ab'", g = "SELECT * FROM t WHERE b = 'ab'";
  CHECK_FALSE(logical_accuracy(p, g));
  // Literal case changes the answer on the fixture, so folding it would be unsound.
  const auto db = fixtures::small_db();
  CHECK(db.execute(p).rows != db.execute(g).rows);
  CHECK_FALSE(execution_accuracy(p, g, db));
}

TEST_CASE("execution accuracy examples") {
  const auto db = fixtures::small_db();
  CHECK(execution_accuracy("SELECT a, b FROM t", "SELECT a, b FROM t", db));
  CHECK_FALSE(execution_accuracy("SELECT b, a FROM t", "SELECT a, b FROM t", db));
  CHECK(execution_accuracy("SELECT SUM(x)/COUNT(x) FROM t", "SELECT AVG(x) FROM t", db));
  double sum = 0;
  for (const auto& r : db.rows(0)) sum += r[2].as_double();
  CHECK(db.execute("SELECT AVG(x) FROM t").rows[0][0].as_double() == doctest::Approx(sum / 3.0));
  CHECK(execution_accuracy("SELECT a FROM t ORDER BY a DESC", "SELECT a FROM t", db));
  CHECK_FALSE(execution_accuracy("SELECT a FROM t", "SELECT a FROM t ORDER BY a DESC", db));
  CHECK(execution_accuracy("SELECT a AS renamed FROM t", "SELECT a FROM t", db));
  CHECK_FALSE(execution_accuracy("SELECT nope FROM t", "SELECT a FROM t", db));
  CHECK_FALSE(execution_accuracy("garbage", "SELECT a FROM t", db));
  CHECK(code_of([&] { execution_accuracy("SELECT a FROM t", "SELECT nope FROM t", db); }) ==
        Errc::kGoldExecutionError);
}

TEST_CASE("numeric tolerance is relative 1e-6") {
  store::ResultTable a{{"v"}, {store::Row{store::Value(1000000.0)}}, false};
  store::ResultTable b{{"w"}, {store::Row{store::Value(1000000.5)}}, false};
  store::ResultTable c{{"w"}, {store::Row{store::Value(1000002.0)}}, false};
  CHECK(results_match(a, b, false, 1e-6));
  CHECK_FALSE(results_match(a, c, false, 1e-6));
}

TEST_CASE("corpus scoring") {
  const auto db = fixtures::small_db();
  const auto ex = examples({"SELECT a FROM t", "SELECT COUNT(*) FROM s", "SELECT b FROM t WHERE a = 1",
                            "SELECT T1.b FROM t AS T1 JOIN s AS T2 ON T1.a = T2.a"});
  auto preds = echo(ex);
  auto r = score_sql_corpus(ex, preds, db);
  CHECK(r.execution_acc == 1.0);
  CHECK(r.logical_acc == 1.0);
  CHECK(r.per_table.at("t").n == 3);
  CHECK(r.per_table.at("s").n == 2);
  preds[1].payload = "SELECT COUNT(*) FROM t";
  r = score_sql_corpus(ex, preds, db);
  CHECK(r.execution_acc == 0.75);
  CHECK(r.logical_acc == 0.75);
  CHECK(r.per_table.at("s").execution_acc() == 0.5);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].id == "e1");
  preds[1].payload = "select count(*) from S";
  r = score_sql_corpus(ex, preds, db);
  CHECK(r.execution_acc == 1.0);
  CHECK(r.logical_acc == 1.0);

  auto missing = preds;
  missing.pop_back();
  CHECK(code_of([&] { score_sql_corpus(ex, missing, db); }) == Errc::kMissingPrediction);
  auto extra = preds;
  extra.push_back({"zz", "SELECT 1"});
  CHECK(code_of([&] { score_sql_corpus(ex, extra, db); }) == Errc::kUnknownId);
  CHECK(to_json(score_sql_corpus(ex, preds, db)) == to_json(score_sql_corpus(ex, preds, db)));
}

TEST_CASE("per-table buckets agree with scanning the gold SQL") {
  auto spec = ingest::SynthSpec::defaults();
  spec.conn = 300;
  spec.dns = spec.http = spec.files = spec.ntp = spec.weird = 40;
  spec.readings_per_sensor = 30;
  const auto db = ingest::database_from_synth(ingest::synthesize_logs(spec));
  templates::GeneratorConfig cfg;
  cfg.n_pairs = 300;
  const auto pairs = templates::generate_corpus(db, templates::default_bank(), cfg);
  std::vector<modelio::SqlExample> ex;
  std::size_t conn = 0;
  for (const auto& p : pairs) {
    ex.push_back({p.id, p.question, p.sql});
    const std::string upper = to_upper(p.sql);
    conn += upper.find("CONN_LOG") != std::string::npos;
  }
  const auto r = score_sql_corpus(ex, echo(ex), db);
  CHECK(r.per_table.at("conn.log").n == conn);
  std::size_t total = 0;
  for (const auto& [t, s] : r.per_table) total += s.n;
  CHECK(total >= r.n);
}

TEST_CASE("property: logical match implies execution match over a generated corpus") {
  auto spec = ingest::SynthSpec::defaults();
  spec.conn = 300;
  spec.dns = spec.http = spec.files = spec.ntp = spec.weird = 40;
  spec.readings_per_sensor = 30;
  const auto db = ingest::database_from_synth(ingest::synthesize_logs(spec));
  templates::GeneratorConfig cfg;
  cfg.n_pairs = 300;
  cfg.seed = 5;
  const auto pairs = templates::generate_corpus(db, templates::default_bank(), cfg);
  Rng rng(8);
  std::size_t violations = 0, matched = 0;
  for (const auto& p : pairs) {
    // Reformat: random identifier/keyword case outside literals, padded punctuation.
    std::string v;
    bool in_str = false;
    char q = 0;
    for (char c : p.sql) {
      if (in_str) {
        v += c;
        if (c == q) in_str = false;
        continue;
      }
      if (c == '"' || c == '\'') {
        in_str = true;
        q = c;
        v += c;
      } else if (c == ',' || c == '(' || c == ')') {
        v += rng.bernoulli(0.5) ? std::string(" ") + c + " " : std::string(1, c);
      } else {
        v += rng.bernoulli(0.5) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    if (logical_accuracy(v, p.sql)) {
      ++matched;
      violations += !execution_accuracy(v, p.sql, db);
    }
  }
  CHECK(matched == pairs.size());
  CHECK(violations == 0);
}

TEST_CASE("detection metrics examples") {
  auto build = [](std::size_t tp, std::size_t fn, std::size_t fp, std::size_t tn) {
    std::vector<bool> g, p;
    for (std::size_t i = 0; i < tp; ++i) g.push_back(true), p.push_back(true);
    for (std::size_t i = 0; i < fn; ++i) g.push_back(true), p.push_back(false);
    for (std::size_t i = 0; i < fp; ++i) g.push_back(false), p.push_back(true);
    for (std::size_t i = 0; i < tn; ++i) g.push_back(false), p.push_back(false);
    return detection_metrics(g, p);
  };
  auto r = build(40, 10, 20, 30);
  CHECK(r.macro_precision == doctest::Approx((40.0 / 60.0 + 30.0 / 40.0) / 2.0).epsilon(1e-12));
  CHECK(r.macro_recall == doctest::Approx(0.70).epsilon(1e-12));
  const double f_mal = 2.0 * (40.0 / 60.0) * 0.8 / (40.0 / 60.0 + 0.8);
  const double f_ben = 2.0 * 0.75 * 0.6 / 1.35;
  CHECK(r.macro_f1 == doctest::Approx((f_mal + f_ben) / 2.0).epsilon(1e-12));
  CHECK(r.confusion[0][0] + r.confusion[0][1] + r.confusion[1][0] + r.confusion[1][1] == 100);

  r = build(5, 0, 0, 5);
  CHECK(r.macro_f1 == 1.0);
  r = build(50, 0, 50, 0);
  CHECK(r.macro_f1 == doctest::Approx(1.0 / 3.0));
  CHECK(r.benign.precision == 0.0);

  CHECK(code_of([] { detection_metrics({true}, {true, false}); }) == Errc::kLengthMismatch);
  CHECK(code_of([] { detection_metrics({}, {}); }) == Errc::kEmpty);
}

TEST_CASE("property: metric bounds and monotone aggregation") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<bool> g(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = rng.bernoulli(0.5);
      p[i] = rng.bernoulli(0.5);
    }
    const auto r = detection_metrics(g, p);
    for (double v : {r.macro_precision, r.macro_recall, r.macro_f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(r.macro_f1 <= std::max(r.benign.f1, r.malicious.f1) + 1e-12);
  }
  const auto db = fixtures::small_db();
  const auto ex = examples({"SELECT a FROM t", "SELECT b FROM t", "SELECT x FROM t", "SELECT c FROM s",
                            "SELECT a FROM s"});
  auto preds = echo(ex);
  double prev = score_sql_corpus(ex, preds, db).execution_acc;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    preds[i].payload = "SELECT 42";
    const double now = score_sql_corpus(ex, preds, db).execution_acc;
    CHECK(prev - now == doctest::Approx(1.0 / 5.0));
    prev = now;
  }
}

TEST_CASE("detection scoring aligns by id") {
  std::vector<modelio::DetectionExample> ex(2);
  ex[0].id = "a";
  ex[0].gold = true;
  ex[1].id = "b";
  const auto r = score_detection(ex, {{"b", "Benign"}, {"a", "malicious"}});
  CHECK(r.macro_f1 == 1.0);
  CHECK(code_of([&] { score_detection(ex, {{"a", "Benign"}}); }) == Errc::kMissingPrediction);
  CHECK(code_of([&] { score_detection(ex, {{"a", "Benign"}, {"b", "Benign"}, {"c", "Benign"}}); }) ==
        Errc::kUnknownId);
}
