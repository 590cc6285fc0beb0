#include "iotsql/store/sql.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::store::sql {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

[[noreturn]] void fail(const std::string& what, std::size_t offset) {
  throw Error(Errc::kParseError, what + " at offset " + std::to_string(offset));
}

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < sql.size()) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.offset = i;
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < sql.size() && ident_char(sql[i])) ++i;
      tok.kind = TokenKind::kIdentifier;
      tok.text = std::string(sql.substr(start, i - start));
    } else if (c == '`') {
      std::size_t end = sql.find('`', i + 1);
      if (end == std::string_view::npos) fail("unterminated quoted identifier", i);
      tok.kind = TokenKind::kIdentifier;
      tok.quoted = true;
      tok.text = std::string(sql.substr(i + 1, end - i - 1));
      i = end + 1;
    } else if (c == '\'' || c == '"') {
      const char quote = c;
      std::string text;
      ++i;
      bool closed = false;
      while (i < sql.size()) {
        char d = sql[i];
        if (d == '\\' && i + 1 < sql.size()) {
          text += sql[i + 1];
          i += 2;
          continue;
        }
        if (d == quote) {
          if (i + 1 < sql.size() && sql[i + 1] == quote) {
            text += quote;
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        text += d;
        ++i;
      }
      if (!closed) fail("unterminated string literal", tok.offset);
      tok.kind = TokenKind::kString;
      tok.text = std::move(text);
    } else if (digit(c)) {
      std::size_t start = i;
      bool is_float = false;
      while (i < sql.size() && digit(sql[i])) ++i;
      if (i + 1 < sql.size() && sql[i] == '.' && digit(sql[i + 1])) {
        is_float = true;
        ++i;
        while (i < sql.size() && digit(sql[i])) ++i;
      }
      if (i < sql.size() && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < sql.size() && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < sql.size() && digit(sql[j])) {
          is_float = true;
          i = j;
          while (i < sql.size() && digit(sql[i])) ++i;
        }
      }
      if (i < sql.size() && ident_char(sql[i])) fail("malformed number", start);
      tok.kind = is_float ? TokenKind::kFloat : TokenKind::kInteger;
      tok.text = std::string(sql.substr(start, i - start));
    } else {
      static constexpr std::array<std::string_view, 4> kTwo = {"!=", "<>", "<=", ">="};
      tok.kind = TokenKind::kSymbol;
      std::string_view two = sql.substr(i, 2);
      if (std::find(kTwo.begin(), kTwo.end(), two) != kTwo.end()) {
        tok.text = two == "<>" ? "!=" : std::string(two);
        i += 2;
      } else if (std::string_view("(),.*+-/=<>;").find(c) != std::string_view::npos) {
        tok.text = std::string(1, c);
        ++i;
      } else {
        fail(std::string("unexpected character '") + c + "'", i);
      }
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.offset = sql.size();
  out.push_back(end);
  return out;
}

namespace {

constexpr std::array<std::string_view, 29> kReserved = {
    "select", "from", "where", "group", "by", "having", "order", "limit", "join", "inner",
    "on", "and", "or", "not", "as", "asc", "desc", "distinct", "between", "in",
    "is", "null", "like", "true", "false", "left", "right", "outer", "union"};

bool reserved(std::string_view word) {
  const std::string l = to_lower(word);
  return std::find(kReserved.begin(), kReserved.end(), l) != kReserved.end();
}

bool aggregate_name(std::string_view word) {
  const std::string u = to_upper(word);
  return u == "AVG" || u == "MIN" || u == "MAX" || u == "SUM" || u == "COUNT";
}

std::unique_ptr<Expr> make(ExprKind kind, std::string op = {}) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->op = std::move(op);
  return e;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::unique_ptr<SelectStmt> statement() {
    auto stmt = select();
    accept_symbol(";");
    if (peek().kind != TokenKind::kEnd) fail("unexpected '" + peek().text + "'", peek().offset);
    return stmt;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kIdentifier && !t.quoted && iequals(t.text, kw);
  }
  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + to_upper(kw), peek().offset);
  }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kSymbol && t.text == s;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    advance();
    return true;
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'", peek().offset);
  }

  std::string identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokenKind::kIdentifier || (!t.quoted && reserved(t.text))) {
      fail("expected " + std::string(what), t.offset);
    }
    return advance().text;
  }

  bool alias_follows() const {
    const Token& t = peek();
    return t.kind == TokenKind::kIdentifier && (t.quoted || !reserved(t.text));
  }

  std::unique_ptr<SelectStmt> select() {
    expect_keyword("select");
    auto stmt = std::make_unique<SelectStmt>();
    stmt->distinct = accept_keyword("distinct");
    do {
      stmt->items.push_back(select_item());
    } while (accept_symbol(","));
    if (accept_keyword("from")) {
      stmt->from = table_ref();
      while (true) {
        if (is_keyword("inner") && is_keyword("join", 1)) {
          advance();
          advance();
        } else if (!accept_keyword("join")) {
          break;
        }
        JoinClause join;
        join.table = table_ref();
        expect_keyword("on");
        join.on = expr();
        stmt->joins.push_back(std::move(join));
      }
      if (is_keyword("left") || is_keyword("right") || is_keyword("outer")) {
        fail("only inner joins are supported", peek().offset);
      }
    }
    if (accept_keyword("where")) stmt->where = expr();
    if (accept_keyword("group")) {
      expect_keyword("by");
      do {
        stmt->group_by.push_back(expr());
      } while (accept_symbol(","));
    }
    if (accept_keyword("having")) stmt->having = expr();
    if (accept_keyword("order")) {
      expect_keyword("by");
      do {
        OrderItem item;
        item.expr = expr();
        if (accept_keyword("desc")) {
          item.descending = true;
        } else {
          accept_keyword("asc");
        }
        stmt->order_by.push_back(std::move(item));
      } while (accept_symbol(","));
    }
    if (accept_keyword("limit")) {
      const Token& t = peek();
      if (t.kind != TokenKind::kInteger) fail("expected integer after LIMIT", t.offset);
      auto n = parse_int(t.text);
      if (!n) fail("bad LIMIT", t.offset);
      advance();
      stmt->limit = *n;
    }
    return stmt;
  }

  SelectItem select_item() {
    SelectItem item;
    if (accept_symbol("*")) {
      item.star = true;
      return item;
    }
    if (peek().kind == TokenKind::kIdentifier && is_symbol(".", 1) && is_symbol("*", 2)) {
      item.star = true;
      item.star_qualifier = advance().text;
      advance();
      advance();
      return item;
    }
    item.expr = expr();
    if (accept_keyword("as")) {
      item.alias = identifier("alias");
    } else if (alias_follows()) {
      item.alias = advance().text;
    }
    return item;
  }

  TableRef table_ref() {
    TableRef ref;
    ref.name = identifier("table name");
    if (accept_symbol(".")) ref.name += "." + identifier("table name");
    if (accept_keyword("as")) {
      ref.alias = identifier("alias");
    } else if (alias_follows()) {
      ref.alias = advance().text;
    }
    return ref;
  }

  std::unique_ptr<Expr> expr() { return or_expr(); }

  std::unique_ptr<Expr> or_expr() {
    auto left = and_expr();
    while (accept_keyword("or")) {
      auto e = make(ExprKind::kBinary, "OR");
      e->args.push_back(std::move(left));
      e->args.push_back(and_expr());
      left = std::move(e);
    }
    return left;
  }

  std::unique_ptr<Expr> and_expr() {
    auto left = not_expr();
    while (accept_keyword("and")) {
      auto e = make(ExprKind::kBinary, "AND");
      e->args.push_back(std::move(left));
      e->args.push_back(not_expr());
      left = std::move(e);
    }
    return left;
  }

  std::unique_ptr<Expr> not_expr() {
    if (accept_keyword("not")) {
      auto e = make(ExprKind::kUnary, "NOT");
      e->args.push_back(not_expr());
      return e;
    }
    return predicate();
  }

  std::unique_ptr<Expr> predicate() {
    auto left = additive();
    static constexpr std::array<std::string_view, 6> kCmp = {"=", "!=", "<", "<=", ">", ">="};
    for (auto op : kCmp) {
      if (accept_symbol(op)) {
        auto e = make(ExprKind::kBinary, std::string(op));
        e->args.push_back(std::move(left));
        e->args.push_back(additive());
        return e;
      }
    }
    bool negated = false;
    if (is_keyword("not") && (is_keyword("between", 1) || is_keyword("in", 1) || is_keyword("like", 1))) {
      advance();
      negated = true;
    }
    if (accept_keyword("between")) {
      auto e = make(ExprKind::kBetween);
      e->negated = negated;
      e->args.push_back(std::move(left));
      e->args.push_back(additive());
      expect_keyword("and");
      e->args.push_back(additive());
      return e;
    }
    if (accept_keyword("in")) {
      expect_symbol("(");
      std::unique_ptr<Expr> e;
      if (is_keyword("select")) {
        e = make(ExprKind::kInSubquery);
        e->subquery = subquery();
      } else {
        e = make(ExprKind::kInList);
        e->args.push_back(nullptr);
        do {
          e->args.push_back(additive());
        } while (accept_symbol(","));
      }
      expect_symbol(")");
      e->negated = negated;
      if (e->kind == ExprKind::kInSubquery) {
        e->args.push_back(std::move(left));
      } else {
        e->args[0] = std::move(left);
      }
      return e;
    }
    if (accept_keyword("like")) {
      auto e = make(ExprKind::kLike);
      e->negated = negated;
      e->args.push_back(std::move(left));
      e->args.push_back(additive());
      return e;
    }
    if (negated) fail("expected BETWEEN, IN or LIKE after NOT", peek().offset);
    if (accept_keyword("is")) {
      auto e = make(ExprKind::kIsNull);
      e->negated = accept_keyword("not");
      expect_keyword("null");
      e->args.push_back(std::move(left));
      return e;
    }
    return left;
  }

  std::unique_ptr<Expr> additive() {
    auto left = multiplicative();
    while (is_symbol("+") || is_symbol("-")) {
      auto e = make(ExprKind::kBinary, advance().text);
      e->args.push_back(std::move(left));
      e->args.push_back(multiplicative());
      left = std::move(e);
    }
    return left;
  }

  std::unique_ptr<Expr> multiplicative() {
    auto left = unary();
    while (is_symbol("*") || is_symbol("/")) {
      auto e = make(ExprKind::kBinary, advance().text);
      e->args.push_back(std::move(left));
      e->args.push_back(unary());
      left = std::move(e);
    }
    return left;
  }

  std::unique_ptr<Expr> unary() {
    if (accept_symbol("-")) {
      auto inner = unary();
      if (inner->kind == ExprKind::kLiteral && inner->literal.is_int()) {
        inner->literal = Value(-inner->literal.as_int());
        return inner;
      }
      if (inner->kind == ExprKind::kLiteral && inner->literal.is_double()) {
        inner->literal = Value(-inner->literal.as_double());
        return inner;
      }
      auto e = make(ExprKind::kUnary, "-");
      e->args.push_back(std::move(inner));
      return e;
    }
    return primary();
  }

  std::unique_ptr<SelectStmt> subquery() {
    if (depth_ >= 1) fail("nested subqueries deeper than one level are not supported", peek().offset);
    ++depth_;
    auto stmt = select();
    --depth_;
    return stmt;
  }

  std::unique_ptr<Expr> primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kString: {
        auto e = make(ExprKind::kLiteral);
        e->literal = Value(advance().text);
        return e;
      }
      case TokenKind::kInteger: {
        auto e = make(ExprKind::kLiteral);
        if (auto i = parse_int(t.text)) {
          e->literal = Value(*i);
        } else if (auto d = parse_double(t.text)) {
          e->literal = Value(*d);
        } else {
          fail("bad number", t.offset);
        }
        advance();
        return e;
      }
      case TokenKind::kFloat: {
        auto e = make(ExprKind::kLiteral);
        auto d = parse_double(t.text);
        if (!d) fail("bad number", t.offset);
        e->literal = Value(*d);
        advance();
        return e;
      }
      case TokenKind::kSymbol: {
        if (t.text != "(") break;
        advance();
        if (is_keyword("select")) {
          auto e = make(ExprKind::kScalarSubquery);
          e->subquery = subquery();
          expect_symbol(")");
          return e;
        }
        auto inner = expr();
        expect_symbol(")");
        return inner;
      }
      case TokenKind::kIdentifier: {
        if (!t.quoted) {
          if (iequals(t.text, "null")) {
            advance();
            return make(ExprKind::kLiteral);
          }
          if (iequals(t.text, "true") || iequals(t.text, "false")) {
            auto e = make(ExprKind::kLiteral);
            e->literal = Value(iequals(advance().text, "true"));
            return e;
          }
          if (aggregate_name(t.text) && is_symbol("(", 1)) return aggregate();
        }
        auto e = make(ExprKind::kColumn);
        std::string first = identifier("column name");
        if (accept_symbol(".")) {
          e->qualifier = std::move(first);
          e->name = identifier("column name");
        } else {
          e->name = std::move(first);
        }
        return e;
      }
      case TokenKind::kEnd:
        fail("unexpected end of query", t.offset);
    }
    fail("unexpected '" + t.text + "'", t.offset);
  }

  std::unique_ptr<Expr> aggregate() {
    auto e = make(ExprKind::kAggregate, to_upper(advance().text));
    expect_symbol("(");
    if (e->op == "COUNT" && accept_symbol("*")) {
      e->args.push_back(make(ExprKind::kStar));
    } else {
      e->distinct = accept_keyword("distinct");
      if (in_aggregate_) fail("nested aggregate", peek().offset);
      in_aggregate_ = true;
      e->args.push_back(expr());
      in_aggregate_ = false;
    }
    expect_symbol(")");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  bool in_aggregate_ = false;
};

void collect_tables(const SelectStmt& stmt, std::vector<std::string>& out);

void collect_tables(const Expr& e, std::vector<std::string>& out) {
  for (const auto& a : e.args) {
    if (a) collect_tables(*a, out);
  }
  if (e.subquery) collect_tables(*e.subquery, out);
}

void collect_tables(const SelectStmt& stmt, std::vector<std::string>& out) {
  if (stmt.from) out.push_back(stmt.from->name);
  for (const auto& j : stmt.joins) {
    out.push_back(j.table.name);
    if (j.on) collect_tables(*j.on, out);
  }
  for (const auto& item : stmt.items) {
    if (item.expr) collect_tables(*item.expr, out);
  }
  if (stmt.where) collect_tables(*stmt.where, out);
  if (stmt.having) collect_tables(*stmt.having, out);
}

std::string literal_sql(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_text()) {
    std::string out = "\"";
    for (char c : v.text()) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  if (v.is_time()) return "\"" + format_iso_time(v.as_time()) + "\"";
  return render(v);
}

}  // namespace

std::unique_ptr<SelectStmt> parse(std::string_view sql) {
  Parser parser(tokenize(sql));
  return parser.statement();
}

std::string to_sql(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kLiteral: return literal_sql(e.literal);
    case ExprKind::kColumn: return e.qualifier.empty() ? e.name : e.qualifier + "." + e.name;
    case ExprKind::kStar: return "*";
    case ExprKind::kUnary:
      return e.op == "NOT" ? "NOT " + to_sql(*e.args[0]) : "-" + to_sql(*e.args[0]);
    case ExprKind::kBinary: {
      const bool logical = e.op == "AND" || e.op == "OR";
      std::string s = to_sql(*e.args[0]) + " " + e.op + " " + to_sql(*e.args[1]);
      return logical ? "(" + s + ")" : s;
    }
    case ExprKind::kBetween:
      return to_sql(*e.args[0]) + (e.negated ? " NOT" : "") + " BETWEEN " + to_sql(*e.args[1]) +
             " AND " + to_sql(*e.args[2]);
    case ExprKind::kInList: {
      std::string s = to_sql(*e.args[0]) + (e.negated ? " NOT IN (" : " IN (");
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        if (i > 1) s += ", ";
        s += to_sql(*e.args[i]);
      }
      return s + ")";
    }
    case ExprKind::kInSubquery:
      return to_sql(*e.args[0]) + (e.negated ? " NOT IN (subquery)" : " IN (subquery)");
    case ExprKind::kScalarSubquery: return "(subquery)";
    case ExprKind::kIsNull: return to_sql(*e.args[0]) + (e.negated ? " IS NOT NULL" : " IS NULL");
    case ExprKind::kLike:
      return to_sql(*e.args[0]) + (e.negated ? " NOT LIKE " : " LIKE ") + to_sql(*e.args[1]);
    case ExprKind::kAggregate:
      return e.op + "(" + (e.distinct ? "DISTINCT " : "") + to_sql(*e.args[0]) + ")";
  }
  return {};
}

std::vector<std::string> table_names(const SelectStmt& stmt) {
  std::vector<std::string> out;
  collect_tables(stmt, out);
  return out;
}

bool contains_aggregate(const Expr& e) {
  if (e.kind == ExprKind::kAggregate) return true;
  for (const auto& a : e.args) {
    if (a && contains_aggregate(*a)) return true;
  }
  return false;
}

}  // namespace iotsql::store::sql
