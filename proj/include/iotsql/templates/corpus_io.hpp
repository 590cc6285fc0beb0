#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "iotsql/store/database.hpp"
#include "iotsql/templates/template.hpp"

namespace iotsql::templates {

// One JSON object per line: id, question, sql, template_id (null when
// hand-written), category, tables_referenced.
void write_corpus(std::ostream& out, const std::vector<TextSqlPair>& pairs);

// Throws ParseError (with line) or DuplicateId.
std::vector<TextSqlPair> read_corpus(std::istream& in);

// Hand-written pairs: lines of {"question": ..., "sql": ...} with optional id
// and category. Each sql must execute on db; ids default to "m00000"...
// Throws ParseError naming the offending line.
std::vector<TextSqlPair> read_manual_pairs(std::istream& in, const store::Database& db);

}  // namespace iotsql::templates
