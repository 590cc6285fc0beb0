#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/store/database.hpp"
#include "iotsql/store/sql.hpp"

namespace iotsql::store {

namespace {

using sql::Expr;
using sql::ExprKind;
using sql::SelectStmt;
using Clock = std::chrono::steady_clock;

constexpr int kSelectItemSlot = -2;

struct ScopeEntry {
  std::size_t table = 0;
  std::string alias_key;
  std::string name_key;
};

// Joined rows, stored as `width` row pointers per tuple.
struct Relation {
  std::size_t width = 1;
  std::vector<const Row*> ptrs;

  std::size_t size() const { return ptrs.size() / width; }
  const Row* const* tuple(std::size_t i) const { return ptrs.data() + i * width; }
};

struct SubqueryResult {
  ResultTable table;
  std::unordered_set<std::string> keys;
  bool has_null = false;
};

bool truthy(const Value& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_number()) return v.as_double() != 0.0;
  return false;
}

std::optional<bool> as_logical(const Value& v) {
  if (v.is_null()) return std::nullopt;
  return truthy(v);
}

bool like_match(std::string_view s, std::string_view p) {
  // Iterative wildcard matching with single-star backtracking.
  std::size_t si = 0, pi = 0, star = std::string_view::npos, mark = 0;
  while (si < s.size()) {
    if (pi < p.size() && (p[pi] == '_' || p[pi] == s[si])) {
      ++si;
      ++pi;
    } else if (pi < p.size() && p[pi] == '%') {
      star = pi++;
      mark = si;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      si = ++mark;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '%') ++pi;
  return pi == p.size();
}

std::optional<Value> numeric(const Value& v) {
  if (v.is_number()) return v;
  if (v.is_bool()) return Value(static_cast<std::int64_t>(v.as_bool()));
  if (v.is_text()) {
    if (auto i = parse_int(trim(v.text()))) return Value(*i);
    if (auto d = parse_double(trim(v.text()))) return Value(*d);
  }
  return std::nullopt;
}

Value arithmetic(const std::string& op, const Value& a, const Value& b) {
  auto x = numeric(a);
  auto y = numeric(b);
  if (!x || !y) return Value::null();
  if (op == "/") {
    const double d = y->as_double();
    if (d == 0.0) return Value::null();
    return Value(x->as_double() / d);
  }
  if (x->is_int() && y->is_int()) {
    std::int64_t r = 0;
    bool overflow = false;
    if (op == "+") overflow = __builtin_add_overflow(x->as_int(), y->as_int(), &r);
    if (op == "-") overflow = __builtin_sub_overflow(x->as_int(), y->as_int(), &r);
    if (op == "*") overflow = __builtin_mul_overflow(x->as_int(), y->as_int(), &r);
    if (!overflow) return Value(r);
  }
  const double p = x->as_double();
  const double q = y->as_double();
  if (op == "+") return Value(p + q);
  if (op == "-") return Value(p - q);
  return Value(p * q);
}

class Executor {
 public:
  Executor(const Database& db, const ExecOptions& options, Clock::time_point deadline)
      : db_(db), options_(options), deadline_(deadline) {}

  ResultTable run(SelectStmt& stmt) {
    build_scope(stmt);
    bind_all(stmt);
    Relation rel = gather(stmt);
    const bool aggregate_mode = !stmt.group_by.empty() || uses_aggregates(stmt);
    return aggregate_mode ? project_groups(stmt, rel) : project_rows(stmt, rel);
  }

 private:
  void tick() {
    if (++ticks_ % 4096 == 0 && Clock::now() > deadline_) {
      throw Error(Errc::kTimeout, "query exceeded " + std::to_string(options_.timeout.count()) + " ms");
    }
  }

  // ---- binding -----------------------------------------------------------

  void build_scope(const SelectStmt& stmt) {
    if (!stmt.from) return;
    auto add = [&](const sql::TableRef& ref) {
      auto idx = db_.schema().find_table(ref.name);
      if (!idx) throw Error(Errc::kUnknownTable, ref.name);
      ScopeEntry entry{*idx, to_lower(ref.alias), table_key(ref.name)};
      for (const auto& e : scope_) {
        const std::string a = e.alias_key.empty() ? e.name_key : e.alias_key;
        const std::string b = entry.alias_key.empty() ? entry.name_key : entry.alias_key;
        if (a == b) throw Error(Errc::kUnknownIdentifier, "duplicate table reference " + ref.name);
      }
      scope_.push_back(std::move(entry));
    };
    add(*stmt.from);
    for (const auto& j : stmt.joins) add(j.table);
  }

  const TableSchema& table_schema(std::size_t slot) const {
    return db_.schema().tables()[scope_[slot].table];
  }

  void bind_column(Expr& e) {
    if (!e.qualifier.empty()) {
      const std::string q = to_lower(e.qualifier);
      const std::string qk = table_key(e.qualifier);
      int found = -1;
      for (std::size_t s = 0; s < scope_.size(); ++s) {
        const bool match = scope_[s].alias_key.empty() ? scope_[s].name_key == qk
                                                       : scope_[s].alias_key == q || scope_[s].name_key == qk;
        if (match) {
          if (found >= 0) throw Error(Errc::kUnknownIdentifier, "ambiguous qualifier " + e.qualifier);
          found = static_cast<int>(s);
        }
      }
      if (found < 0) throw Error(Errc::kUnknownIdentifier, "unknown table " + e.qualifier);
      auto col = table_schema(static_cast<std::size_t>(found)).column_index(e.name);
      if (!col) throw Error(Errc::kUnknownIdentifier, "unknown column " + e.qualifier + "." + e.name);
      e.slot = found;
      e.column = static_cast<int>(*col);
      return;
    }
    int found = -1;
    for (std::size_t s = 0; s < scope_.size(); ++s) {
      if (auto col = table_schema(s).column_index(e.name)) {
        if (found >= 0) throw Error(Errc::kUnknownIdentifier, "ambiguous column " + e.name);
        found = static_cast<int>(s);
        e.column = static_cast<int>(*col);
      }
    }
    if (found < 0) throw Error(Errc::kUnknownIdentifier, "unknown column " + e.name);
    e.slot = found;
  }

  // Aliases of select items may be referenced from HAVING and ORDER BY.
  std::optional<std::size_t> select_alias(const SelectStmt& stmt, const Expr& e) const {
    if (e.kind != ExprKind::kColumn || !e.qualifier.empty()) return std::nullopt;
    for (std::size_t i = 0; i < stmt.items.size(); ++i) {
      if (!stmt.items[i].alias.empty() && iequals(stmt.items[i].alias, e.name)) return i;
    }
    return std::nullopt;
  }

  void bind(Expr& e, const SelectStmt* alias_source) {
    switch (e.kind) {
      case ExprKind::kColumn: {
        if (alias_source) {
          if (auto idx = select_alias(*alias_source, e)) {
            bool is_column = false;
            for (std::size_t s = 0; s < scope_.size() && !is_column; ++s) {
              is_column = table_schema(s).column_index(e.name).has_value();
            }
            if (!is_column) {
              e.slot = kSelectItemSlot;
              e.column = static_cast<int>(*idx);
              return;
            }
          }
        }
        bind_column(e);
        return;
      }
      case ExprKind::kInSubquery:
      case ExprKind::kScalarSubquery:
        break;
      default:
        break;
    }
    for (auto& a : e.args) {
      if (a) bind(*a, alias_source);
    }
  }

  void bind_all(SelectStmt& stmt) {
    for (auto& item : stmt.items) {
      if (item.star) {
        if (scope_.empty()) throw Error(Errc::kUnknownIdentifier, "* without FROM");
        if (!item.star_qualifier.empty()) star_slot(item.star_qualifier);
        continue;
      }
      bind(*item.expr, nullptr);
    }
    for (auto& j : stmt.joins) bind(*j.on, nullptr);
    if (stmt.where) bind(*stmt.where, nullptr);
    for (auto& g : stmt.group_by) bind(*g, nullptr);
    if (stmt.having) bind(*stmt.having, &stmt);
    for (auto& o : stmt.order_by) {
      if (o.expr->kind == ExprKind::kLiteral && o.expr->literal.is_int()) {
        const auto n = o.expr->literal.as_int();
        if (n < 1 || static_cast<std::size_t>(n) > output_width(stmt)) {
          throw Error(Errc::kUnknownIdentifier, "ORDER BY position out of range");
        }
        continue;
      }
      bind(*o.expr, &stmt);
    }
  }

  std::size_t star_slot(const std::string& qualifier) const {
    const std::string q = to_lower(qualifier);
    const std::string qk = table_key(qualifier);
    for (std::size_t s = 0; s < scope_.size(); ++s) {
      if (scope_[s].alias_key == q || (scope_[s].alias_key.empty() && scope_[s].name_key == qk)) return s;
    }
    throw Error(Errc::kUnknownIdentifier, "unknown table " + qualifier);
  }

  std::size_t output_width(const SelectStmt& stmt) const {
    std::size_t n = 0;
    for (const auto& item : stmt.items) {
      if (!item.star) {
        ++n;
      } else if (!item.star_qualifier.empty()) {
        n += table_schema(star_slot(item.star_qualifier)).columns.size();
      } else {
        for (std::size_t s = 0; s < scope_.size(); ++s) n += table_schema(s).columns.size();
      }
    }
    return n;
  }

  static bool uses_aggregates(const SelectStmt& stmt) {
    for (const auto& item : stmt.items) {
      if (item.expr && sql::contains_aggregate(*item.expr)) return true;
    }
    if (stmt.having) return true;
    for (const auto& o : stmt.order_by) {
      if (sql::contains_aggregate(*o.expr)) return true;
    }
    return false;
  }

  // ---- row gathering -----------------------------------------------------

  Relation gather(const SelectStmt& stmt) {
    Relation rel;
    if (!stmt.from) {
      static const Row kEmpty;
      rel.width = 1;
      rel.ptrs.push_back(&kEmpty);
      if (stmt.where && !passes(*stmt.where, rel.tuple(0))) rel.ptrs.clear();
      return rel;
    }
    rel.width = 1;
    const auto& first = db_.rows(scope_[0].table);
    const bool filter_now = stmt.joins.empty() && stmt.where;
    rel.ptrs.reserve(filter_now ? 0 : first.size());
    for (const auto& r : first) {
      tick();
      const Row* p = &r;
      if (filter_now && !passes(*stmt.where, &p)) continue;
      rel.ptrs.push_back(p);
    }
    for (std::size_t j = 0; j < stmt.joins.size(); ++j) {
      rel = join(rel, j + 1, *stmt.joins[j].on);
    }
    if (!stmt.joins.empty() && stmt.where) {
      Relation filtered;
      filtered.width = rel.width;
      for (std::size_t i = 0; i < rel.size(); ++i) {
        tick();
        if (passes(*stmt.where, rel.tuple(i))) {
          filtered.ptrs.insert(filtered.ptrs.end(), rel.tuple(i), rel.tuple(i) + rel.width);
        }
      }
      rel = std::move(filtered);
    }
    return rel;
  }

  static void conjuncts(const Expr& e, std::vector<const Expr*>& out) {
    if (e.kind == ExprKind::kBinary && e.op == "AND") {
      conjuncts(*e.args[0], out);
      conjuncts(*e.args[1], out);
    } else {
      out.push_back(&e);
    }
  }

  Relation join(const Relation& left, std::size_t new_slot, const Expr& on) {
    Relation out;
    out.width = left.width + 1;
    const auto& right_rows = db_.rows(scope_[new_slot].table);
    std::vector<const Row*> tuple(out.width);

    std::vector<const Expr*> parts;
    conjuncts(on, parts);
    const Expr* left_key = nullptr;
    const Expr* right_key = nullptr;
    for (const Expr* p : parts) {
      if (p->kind != ExprKind::kBinary || p->op != "=") continue;
      const Expr* a = p->args[0].get();
      const Expr* b = p->args[1].get();
      if (a->kind != ExprKind::kColumn || b->kind != ExprKind::kColumn) continue;
      if (a->slot == static_cast<int>(new_slot) && b->slot >= 0 && b->slot < static_cast<int>(new_slot)) {
        std::swap(a, b);
      }
      if (b->slot == static_cast<int>(new_slot) && a->slot >= 0 && a->slot < static_cast<int>(new_slot)) {
        left_key = a;
        right_key = b;
        break;
      }
    }

    auto emit = [&](std::size_t i, const Row* r) {
      std::copy(left.tuple(i), left.tuple(i) + left.width, tuple.begin());
      tuple[left.width] = r;
      if (passes(on, tuple.data())) out.ptrs.insert(out.ptrs.end(), tuple.begin(), tuple.end());
    };

    if (left_key) {
      std::unordered_map<std::string, std::vector<const Row*>> index;
      for (const auto& r : right_rows) {
        tick();
        const Value& v = r[right_key->column];
        if (!v.is_null()) index[identity_key(v)].push_back(&r);
      }
      for (std::size_t i = 0; i < left.size(); ++i) {
        tick();
        const Value& v = (*left.tuple(i)[left_key->slot])[left_key->column];
        if (v.is_null()) continue;
        auto it = index.find(identity_key(v));
        if (it == index.end()) continue;
        for (const Row* r : it->second) {
          tick();
          emit(i, r);
        }
      }
    } else {
      for (std::size_t i = 0; i < left.size(); ++i) {
        for (const auto& r : right_rows) {
          tick();
          emit(i, &r);
        }
      }
    }
    return out;
  }

  bool passes(const Expr& cond, const Row* const* tuple) {
    return truthy(eval(cond, tuple, nullptr));
  }

  // ---- evaluation --------------------------------------------------------

  struct Group {
    const Relation* rel = nullptr;
    const std::vector<std::size_t>* members = nullptr;
    const SelectStmt* stmt = nullptr;
  };

  Value eval(const Expr& e, const Row* const* tuple, const Group* group) {
    switch (e.kind) {
      case ExprKind::kLiteral:
        return e.literal;
      case ExprKind::kColumn: {
        if (e.slot == kSelectItemSlot) {
          const SelectStmt* stmt = group ? group->stmt : current_stmt_;
          return eval(*stmt->items[static_cast<std::size_t>(e.column)].expr, tuple, group);
        }
        if (!tuple || !tuple[e.slot]) return Value::null();
        return (*tuple[e.slot])[static_cast<std::size_t>(e.column)];
      }
      case ExprKind::kStar:
        return Value(static_cast<std::int64_t>(1));
      case ExprKind::kUnary: {
        Value v = eval(*e.args[0], tuple, group);
        if (e.op == "NOT") {
          auto b = as_logical(v);
          return b ? Value(!*b) : Value::null();
        }
        return arithmetic("-", Value(static_cast<std::int64_t>(0)), v);
      }
      case ExprKind::kBinary:
        return eval_binary(e, tuple, group);
      case ExprKind::kBetween: {
        Value v = eval(*e.args[0], tuple, group);
        auto lo = sql_compare(v, eval(*e.args[1], tuple, group), options_.float_rel_tol);
        auto hi = sql_compare(v, eval(*e.args[2], tuple, group), options_.float_rel_tol);
        if (!lo || !hi) return Value::null();
        const bool inside = *lo >= 0 && *hi <= 0;
        return Value(e.negated ? !inside : inside);
      }
      case ExprKind::kInList: {
        Value v = eval(*e.args[0], tuple, group);
        if (v.is_null()) return Value::null();
        bool saw_null = false;
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          auto c = sql_compare(v, eval(*e.args[i], tuple, group), options_.float_rel_tol);
          if (!c) {
            saw_null = true;
          } else if (*c == 0) {
            return Value(!e.negated);
          }
        }
        if (saw_null) return Value::null();
        return Value(e.negated);
      }
      case ExprKind::kInSubquery: {
        Value v = eval(*e.args[0], tuple, group);
        if (v.is_null()) return Value::null();
        const SubqueryResult& sub = subquery(e);
        if (sub.keys.count(identity_key(v))) return Value(!e.negated);
        if (sub.has_null) return Value::null();
        return Value(e.negated);
      }
      case ExprKind::kScalarSubquery: {
        const SubqueryResult& sub = subquery(e);
        if (sub.table.rows.empty()) return Value::null();
        return sub.table.rows[0][0];
      }
      case ExprKind::kIsNull: {
        const bool is_null = eval(*e.args[0], tuple, group).is_null();
        return Value(e.negated ? !is_null : is_null);
      }
      case ExprKind::kLike: {
        Value v = eval(*e.args[0], tuple, group);
        Value p = eval(*e.args[1], tuple, group);
        if (v.is_null() || p.is_null()) return Value::null();
        const bool m = like_match(render(v), render(p));
        return Value(e.negated ? !m : m);
      }
      case ExprKind::kAggregate:
        return eval_aggregate(e, group);
    }
    return Value::null();
  }

  Value eval_binary(const Expr& e, const Row* const* tuple, const Group* group) {
    if (e.op == "AND" || e.op == "OR") {
      auto a = as_logical(eval(*e.args[0], tuple, group));
      const bool is_and = e.op == "AND";
      if (a && *a != is_and) return Value(*a);  // short circuit
      auto b = as_logical(eval(*e.args[1], tuple, group));
      if (is_and) {
        if (b && !*b) return Value(false);
        if (a && b) return Value(true);
        return Value::null();
      }
      if (b && *b) return Value(true);
      if (a && b) return Value(false);
      return Value::null();
    }
    Value a = eval(*e.args[0], tuple, group);
    Value b = eval(*e.args[1], tuple, group);
    if (e.op == "+" || e.op == "-" || e.op == "*" || e.op == "/") return arithmetic(e.op, a, b);
    auto c = sql_compare(a, b, options_.float_rel_tol);
    if (!c) return Value::null();
    if (e.op == "=") return Value(*c == 0);
    if (e.op == "!=") return Value(*c != 0);
    if (e.op == "<") return Value(*c < 0);
    if (e.op == "<=") return Value(*c <= 0);
    if (e.op == ">") return Value(*c > 0);
    return Value(*c >= 0);
  }

  Value eval_aggregate(const Expr& e, const Group* group) {
    if (!group) throw Error(Errc::kUnknownIdentifier, "aggregate " + e.op + " outside aggregation context");
    const Expr& arg = *e.args[0];
    if (e.op == "COUNT" && arg.kind == ExprKind::kStar) {
      return Value(static_cast<std::int64_t>(group->members->size()));
    }
    std::vector<Value> values;
    values.reserve(group->members->size());
    std::unordered_set<std::string> seen;
    for (std::size_t idx : *group->members) {
      tick();
      Value v = eval(arg, group->rel->tuple(idx), nullptr);
      if (v.is_null()) continue;
      if (e.distinct && !seen.insert(identity_key(v)).second) continue;
      values.push_back(std::move(v));
    }
    if (e.op == "COUNT") return Value(static_cast<std::int64_t>(values.size()));
    if (e.op == "MIN" || e.op == "MAX") {
      if (values.empty()) return Value::null();
      const bool want_min = e.op == "MIN";
      std::size_t best = 0;
      for (std::size_t i = 1; i < values.size(); ++i) {
        const int c = order_compare(values[i], values[best]);
        if (want_min ? c < 0 : c > 0) best = i;
      }
      return values[best];
    }
    // SUM / AVG over the numeric inputs; non-numeric values are skipped.
    bool all_int = true;
    std::int64_t isum = 0;
    double dsum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
      auto x = numeric(v);
      if (!x || v.is_bool()) continue;
      ++n;
      dsum += x->as_double();
      if (all_int && x->is_int() && !__builtin_add_overflow(isum, x->as_int(), &isum)) continue;
      all_int = false;
    }
    if (n == 0) return Value::null();
    if (e.op == "SUM") return all_int ? Value(isum) : Value(dsum);
    return Value((all_int ? static_cast<double>(isum) : dsum) / static_cast<double>(n));
  }

  const SubqueryResult& subquery(const Expr& e) {
    auto it = subqueries_.find(&e);
    if (it != subqueries_.end()) return it->second;
    Executor inner(db_, options_, deadline_);
    SubqueryResult res;
    res.table = inner.run(*e.subquery);
    if (res.table.columns.size() != 1) {
      throw Error(Errc::kTypeMismatch, "subquery must return exactly one column");
    }
    if (e.kind == ExprKind::kScalarSubquery && res.table.rows.size() > 1) {
      throw Error(Errc::kTypeMismatch, "scalar subquery returned more than one row");
    }
    for (const auto& r : res.table.rows) {
      if (r[0].is_null()) {
        res.has_null = true;
      } else {
        res.keys.insert(identity_key(r[0]));
      }
    }
    return subqueries_.emplace(&e, std::move(res)).first->second;
  }

  // ---- projection --------------------------------------------------------

  std::vector<std::string> column_names(const SelectStmt& stmt) const {
    std::vector<std::string> names;
    for (const auto& item : stmt.items) {
      if (!item.star) {
        names.push_back(item.alias.empty() ? sql::to_sql(*item.expr) : item.alias);
        continue;
      }
      for (std::size_t s = 0; s < scope_.size(); ++s) {
        if (!item.star_qualifier.empty() && s != star_slot(item.star_qualifier)) continue;
        for (const auto& c : table_schema(s).columns) names.push_back(c.name);
      }
    }
    return names;
  }

  Row output_row(const SelectStmt& stmt, const Row* const* tuple, const Group* group) {
    Row out;
    for (const auto& item : stmt.items) {
      if (!item.star) {
        out.push_back(eval(*item.expr, tuple, group));
        continue;
      }
      for (std::size_t s = 0; s < scope_.size(); ++s) {
        if (!item.star_qualifier.empty() && s != star_slot(item.star_qualifier)) continue;
        const std::size_t ncols = table_schema(s).columns.size();
        for (std::size_t c = 0; c < ncols; ++c) {
          out.push_back(tuple && tuple[s] ? (*tuple[s])[c] : Value::null());
        }
      }
    }
    return out;
  }

  struct Pending {
    Row row;
    std::vector<Value> keys;
  };

  std::vector<Value> sort_keys(const SelectStmt& stmt, const Row& out, const Row* const* tuple,
                               const Group* group) {
    std::vector<Value> keys;
    for (const auto& o : stmt.order_by) {
      if (o.expr->kind == ExprKind::kLiteral && o.expr->literal.is_int()) {
        keys.push_back(out[static_cast<std::size_t>(o.expr->literal.as_int() - 1)]);
      } else {
        keys.push_back(eval(*o.expr, tuple, group));
      }
    }
    return keys;
  }

  ResultTable finish(const SelectStmt& stmt, std::vector<Pending> pending) {
    ResultTable result;
    result.columns = column_names(stmt);
    result.ordered = !stmt.order_by.empty();
    if (stmt.distinct) {
      std::unordered_set<std::string> seen;
      std::vector<Pending> unique;
      for (auto& p : pending) {
        std::string key;
        for (const auto& v : p.row) key += identity_key(v) + '\x1f';
        if (seen.insert(std::move(key)).second) unique.push_back(std::move(p));
      }
      pending = std::move(unique);
    }
    if (!stmt.order_by.empty()) {
      std::stable_sort(pending.begin(), pending.end(), [&](const Pending& a, const Pending& b) {
        for (std::size_t k = 0; k < stmt.order_by.size(); ++k) {
          int c = order_compare(a.keys[k], b.keys[k]);
          if (c != 0) return stmt.order_by[k].descending ? c > 0 : c < 0;
        }
        return false;
      });
    }
    std::size_t n = pending.size();
    if (stmt.limit) n = std::min<std::size_t>(n, static_cast<std::size_t>(std::max<std::int64_t>(0, *stmt.limit)));
    result.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) result.rows.push_back(std::move(pending[i].row));
    return result;
  }

  ResultTable project_rows(const SelectStmt& stmt, const Relation& rel) {
    current_stmt_ = &stmt;
    std::vector<Pending> pending;
    pending.reserve(rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i) {
      tick();
      Pending p;
      p.row = output_row(stmt, rel.tuple(i), nullptr);
      p.keys = sort_keys(stmt, p.row, rel.tuple(i), nullptr);
      pending.push_back(std::move(p));
    }
    return finish(stmt, std::move(pending));
  }

  ResultTable project_groups(const SelectStmt& stmt, const Relation& rel) {
    current_stmt_ = &stmt;
    std::vector<std::vector<std::size_t>> groups;
    if (stmt.group_by.empty()) {
      groups.emplace_back();
      for (std::size_t i = 0; i < rel.size(); ++i) groups[0].push_back(i);
    } else {
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < rel.size(); ++i) {
        tick();
        std::string key;
        for (const auto& g : stmt.group_by) key += identity_key(eval(*g, rel.tuple(i), nullptr)) + '\x1f';
        auto [it, inserted] = index.emplace(std::move(key), groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
      }
    }
    std::vector<Pending> pending;
    for (const auto& members : groups) {
      tick();
      Group g{&rel, &members, &stmt};
      const Row* const* first = members.empty() ? nullptr : rel.tuple(members[0]);
      if (stmt.having && !truthy(eval(*stmt.having, first, &g))) continue;
      Pending p;
      p.row = output_row(stmt, first, &g);
      p.keys = sort_keys(stmt, p.row, first, &g);
      pending.push_back(std::move(p));
    }
    return finish(stmt, std::move(pending));
  }

  const Database& db_;
  const ExecOptions& options_;
  Clock::time_point deadline_;
  std::vector<ScopeEntry> scope_;
  std::map<const Expr*, SubqueryResult> subqueries_;
  const SelectStmt* current_stmt_ = nullptr;
  std::uint64_t ticks_ = 0;
};

}  // namespace

ResultTable Database::execute(std::string_view query, const ExecOptions& options) const {
  auto stmt = sql::parse(query);
  Executor exec(*this, options, Clock::now() + options.timeout);
  return exec.run(*stmt);
}

std::vector<std::string> Database::referenced_tables(std::string_view query) const {
  auto stmt = sql::parse(query);
  std::vector<std::string> out;
  for (const auto& name : sql::table_names(*stmt)) {
    auto idx = schema_.find_table(name);
    if (!idx) throw Error(Errc::kUnknownTable, name);
    out.push_back(schema_.tables()[*idx].name);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace iotsql::store
