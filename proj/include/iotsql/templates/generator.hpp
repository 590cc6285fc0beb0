#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/common/rng.hpp"
#include "iotsql/store/database.hpp"
#include "iotsql/templates/template.hpp"

namespace iotsql::templates {

// Binds template slots against one database. Caches the distinct values of
// each column, so reuse one instance for many instantiations.
class Instantiator {
 public:
  explicit Instantiator(const store::Database& db) : db_(db) {}

  // Throws UnsatisfiableSlot when no binding satisfies the constraints. The
  // emitted SQL has been executed on the database.
  TextSqlPair instantiate(const QueryTemplate& t, Rng& rng, Bindings* bindings_out = nullptr);

  // Distinct non-null values of a column in order_compare order.
  const std::vector<store::Value>& values(std::size_t table, std::size_t column);

  const store::Database& db() const { return db_; }

 private:
  const store::Database& db_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<store::Value>> cache_;
};

TextSqlPair instantiate(const QueryTemplate& t, const store::Database& db, Rng& rng);

// SQL literal and natural-language form of a sampled value.
std::string sql_literal(const store::Value& v);
std::string nl_value(const store::Value& v);

struct GeneratorConfig {
  std::size_t n_pairs = 0;
  std::map<std::string, double> template_weights;  // by id; missing ids weigh 1
  std::uint64_t seed = 13;
  std::size_t max_attempts = 200;  // per pair
  double temporal_floor = 0.10;
};

// Exactly n_pairs pairs, unique in (question, sql), ids "p00000"... Pair i
// draws from an RNG derived from (seed, i, attempt). Throws ExhaustedResampling.
std::vector<TextSqlPair> generate_corpus(const store::Database& db, const std::vector<QueryTemplate>& bank,
                                         const GeneratorConfig& config);

// True when the statement compares a time column in WHERE or HAVING
// (including inside its subquery).
bool has_datetime_predicate(std::string_view sql, const store::DatabaseSchema& schema);

// Whether a template always yields a datetime predicate.
bool is_temporal(const QueryTemplate& t);

}  // namespace iotsql::templates
