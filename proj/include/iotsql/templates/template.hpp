#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/store/value.hpp"

namespace iotsql::templates {

enum class SlotKind {
  kAggOp,
  kAggColumn,
  kTable,
  kCondColumn,
  kCondOp,
  kCondValue,
  kJoinTable,
  kJoinKey,
  kLimitN,
  kOrderColumn,
  kTimeLo,
  kTimeHi,
};

// "AGG_OP", "COND_COLUMN", ...
std::string_view slot_kind_name(SlotKind k);
std::optional<SlotKind> parse_slot_kind(std::string_view s);

enum class Category { kRetrieval, kReasoning };
std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view s);

// A placeholder occurrence: $COND_COLUMN2:short -> {kCondColumn, "2", "short"}.
struct Placeholder {
  SlotKind kind = SlotKind::kTable;
  std::string suffix;
  std::string modifier;
  std::size_t offset = 0;  // position of '$'
  std::size_t length = 0;

  std::string name() const;  // "COND_COLUMN2"
};

// Every placeholder in a pattern, in order. Throws ParseError on "$" not
// followed by a slot name or on an unknown modifier.
std::vector<Placeholder> find_placeholders(std::string_view pattern);

struct SlotConstraint {
  std::vector<store::Attribute> attributes;  // columns / values
  std::vector<std::string> columns;          // allowed column names
  std::vector<std::string> tables;           // TABLE / JOIN_TABLE
  std::vector<std::string> ops;              // AGG_OP / COND_OP
  std::string of;                            // owning slot, e.g. COND_VALUE of AGG_COLUMN
  std::int64_t lo = 1, hi = 20;              // LIMIT_N range
};

struct QueryTemplate {
  std::string id;
  Category category = Category::kRetrieval;
  std::string sql_pattern;
  std::vector<std::string> nl_patterns;
  std::map<std::string, SlotConstraint> constraints;  // by placeholder name

  // Distinct placeholder names of sql_pattern in first-occurrence order.
  std::vector<std::string> slots() const;
  const SlotConstraint* constraint(std::string_view name) const;
};

// Bank text:
//   [T01]
//   category: retrieval
//   sql: SELECT DISTINCT $AGG_COLUMN FROM $TABLE WHERE ($COND_COLUMN $COND_OP $COND_VALUE)
//   nl: List the distinct $AGG_COLUMN for the $TABLE table with $COND_COLUMN $COND_OP $COND_VALUE
//   slot: COND_OP ops=[=]
// Throws ParseError (with line) on malformed records, fewer than three nl
// lines, or nl placeholders absent from the sql pattern.
std::vector<QueryTemplate> parse_template_bank(std::string_view text);

// The shipped 27-template bank.
const std::vector<QueryTemplate>& default_bank();

// A bound slot: SQL text and its natural-language rendering.
struct Binding {
  std::string sql;
  std::string nl;
  std::string nl_short;  // $X:short
};
using Bindings = std::map<std::string, Binding>;

// Substitutes bindings into a pattern. Throws UnboundPlaceholder.
std::string substitute(std::string_view pattern, const Bindings& b, bool sql);

// Question text from nl_patterns[variant]. Throws UnboundPlaceholder.
std::string realize_question(const QueryTemplate& t, const Bindings& b, std::size_t variant);

// Natural-language forms used by the renderer.
std::string table_nl(std::string_view table, bool short_form);
std::string_view agg_op_nl(std::string_view op);
std::string_view cond_op_nl(std::string_view op);

struct TextSqlPair {
  std::string id;
  std::string question;
  std::string sql;
  std::optional<std::string> template_id;  // absent for hand-written pairs
  std::optional<Category> category;
  std::vector<std::string> tables_referenced;

  friend bool operator==(const TextSqlPair&, const TextSqlPair&) = default;
};

}  // namespace iotsql::templates
