#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/store/value.hpp"

namespace iotsql::store::sql {

enum class TokenKind {
  kIdentifier,  // bare word or `quoted`; keywords are identifiers too
  kString,      // 'single' or "double" quoted literal
  kInteger,
  kFloat,
  kSymbol,      // ( ) , . * + - / = != <> < <= > >= ;
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // literal content for strings, raw text otherwise
  bool quoted = false;
  std::size_t offset = 0;
};

// Throws ParseError on unterminated strings or stray characters.
std::vector<Token> tokenize(std::string_view sql);

struct SelectStmt;

enum class ExprKind {
  kLiteral,
  kColumn,
  kStar,       // COUNT(*) argument
  kUnary,      // op: "NOT" or "-"
  kBinary,     // op: AND OR = != < <= > >= + - * /
  kBetween,
  kInList,
  kInSubquery,
  kScalarSubquery,
  kIsNull,
  kLike,
  kAggregate,  // op: AVG MIN MAX SUM COUNT
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  std::string op;
  Value literal;
  std::string qualifier;  // table or alias for columns
  std::string name;       // column name
  bool negated = false;
  bool distinct = false;  // COUNT(DISTINCT x)
  std::vector<std::unique_ptr<Expr>> args;
  std::unique_ptr<SelectStmt> subquery;

  // Filled in by the executor's binder: flattened (table slot, column) pair.
  int slot = -1;
  int column = -1;
};

struct SelectItem {
  std::unique_ptr<Expr> expr;  // null for * / qualifier.*
  std::string star_qualifier;
  bool star = false;
  std::string alias;
};

struct TableRef {
  std::string name;
  std::string alias;
};

struct JoinClause {
  TableRef table;
  std::unique_ptr<Expr> on;
};

struct OrderItem {
  std::unique_ptr<Expr> expr;
  bool descending = false;
};

struct SelectStmt {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::optional<TableRef> from;
  std::vector<JoinClause> joins;
  std::unique_ptr<Expr> where;
  std::vector<std::unique_ptr<Expr>> group_by;
  std::unique_ptr<Expr> having;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
};

// Parses one SELECT statement (an optional trailing ';' is allowed).
// Subqueries may appear in expressions but may not themselves nest.
std::unique_ptr<SelectStmt> parse(std::string_view sql);

// SQL text for an expression, used to name result columns.
std::string to_sql(const Expr& e);

// Every table name referenced anywhere in the statement, as written.
std::vector<std::string> table_names(const SelectStmt& stmt);

bool contains_aggregate(const Expr& e);

}  // namespace iotsql::store::sql
