#include "iotsql/templates/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/store/sql.hpp"

namespace iotsql::templates {

using store::Attribute;
using store::Value;

std::string sql_literal(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_bool()) return v.as_bool() ? "TRUE" : "FALSE";
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_double()) return format_double(v.as_double());
  std::string raw = v.is_time() ? format_iso_time(v.as_time()) : v.text();
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string nl_value(const Value& v) {
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_time()) return format_iso_time(v.as_time());
  return render(v);
}

const std::vector<Value>& Instantiator::values(std::size_t table, std::size_t column) {
  auto key = std::make_pair(table, column);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::set<std::string> seen;
  std::vector<Value> vals;
  for (const auto& row : db_.rows(table)) {
    const Value& v = row[column];
    if (v.is_null()) continue;
    if (v.is_text()) {
      const auto& s = v.text();
      if (s.empty() || s.size() > 80) continue;
      if (std::any_of(s.begin(), s.end(), [](char c) { return c == '\\' || static_cast<unsigned char>(c) < 0x20; })) {
        continue;
      }
    }
    if (seen.insert(store::identity_key(v)).second) vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end(), [](const Value& a, const Value& b) { return store::order_compare(a, b) < 0; });
  return cache_.emplace(key, std::move(vals)).first->second;
}

namespace {

struct Unsatisfied {
  std::string slot;
};

constexpr std::array<std::string_view, 5> kAggOps = {"AVG", "MIN", "MAX", "SUM", "COUNT"};
constexpr std::array<std::string_view, 6> kCondOps = {"=", "!=", "<", "<=", ">", ">="};

bool has(const std::vector<std::string>& slots, const std::string& name) {
  return std::find(slots.begin(), slots.end(), name) != slots.end();
}

std::string suffix_of(const std::string& name) {
  std::size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
  return name.substr(i);
}

std::vector<Attribute> agg_attributes(std::string_view op) {
  if (op == "AVG" || op == "SUM") return {Attribute::kNumber};
  if (op == "MIN" || op == "MAX") return {Attribute::kNumber, Attribute::kTime};
  return {Attribute::kText, Attribute::kNumber, Attribute::kTime, Attribute::kBoolean};
}

bool is_column_slot(SlotKind k) {
  return k == SlotKind::kAggColumn || k == SlotKind::kCondColumn || k == SlotKind::kOrderColumn;
}

class Binder {
 public:
  Binder(Instantiator& inst, const QueryTemplate& t, Rng& rng) : inst_(inst), t_(t), rng_(rng), slots_(t.slots()) {}

  Bindings bind(std::size_t table) {
    b_.clear();
    tables_.clear();
    columns_.clear();
    set_table("TABLE", table);
    if (has(slots_, "JOIN_TABLE")) bind_join();
    for (const auto& name : slots_) {
      auto kind = kind_of(name);
      if (kind == SlotKind::kAggOp) continue;  // bound with its column
      if (is_column_slot(kind)) bind_column(name, kind);
    }
    for (const auto& name : slots_) {
      auto kind = kind_of(name);
      if (kind == SlotKind::kAggOp && !b_.count(name)) {
        // Op without a column of the same suffix.
        bind_ops(name, allowed_ops(name, kAggOps));
      }
    }
    for (const auto& name : slots_) {
      switch (kind_of(name)) {
        case SlotKind::kCondOp: bind_cond_op(name); break;
        case SlotKind::kCondValue: bind_value(name); break;
        case SlotKind::kLimitN: {
          const SlotConstraint* c = t_.constraint(name);
          const auto n = rng_.between(c ? c->lo : 1, c ? c->hi : 20);
          b_[name] = {std::to_string(n), std::to_string(n), {}};
          break;
        }
        default: break;
      }
    }
    bind_times();
    return b_;
  }

 private:
  SlotKind kind_of(const std::string& name) const { return find_placeholders("$" + name).at(0).kind; }

  const store::DatabaseSchema& schema() const { return inst_.db().schema(); }

  void set_table(const std::string& name, std::size_t table) {
    tables_[name] = table;
    const std::string& tname = schema().tables()[table].name;
    b_[name] = {store::sql_table_name(tname), table_nl(tname, false), table_nl(tname, true)};
  }

  bool table_allowed(const std::string& slot, std::size_t table) const {
    const SlotConstraint* c = t_.constraint(slot);
    if (!c || c->tables.empty()) return true;
    const std::string key = store::table_key(schema().tables()[table].name);
    return std::any_of(c->tables.begin(), c->tables.end(), [&](const std::string& n) { return store::table_key(n) == key; });
  }

  bool column_usable(std::size_t table, std::size_t col) { return !inst_.values(table, col).empty(); }

  void bind_join() {
    const std::size_t left = tables_.at("TABLE");
    const SlotConstraint* kc = t_.constraint("JOIN_KEY");
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> options;  // table, key columns in the left table
    for (std::size_t t = 0; t < schema().tables().size(); ++t) {
      if (t == left || inst_.db().rows(t).empty() || !table_allowed("JOIN_TABLE", t)) continue;
      std::vector<std::size_t> keys;
      const auto& lcols = schema().tables()[left].columns;
      for (std::size_t c = 0; c < lcols.size(); ++c) {
        if (kc && !kc->columns.empty() && !has(kc->columns, lcols[c].name)) continue;
        auto rc = schema().tables()[t].column_index(lcols[c].name);
        if (!rc || schema().tables()[t].columns[*rc].attribute != lcols[c].attribute) continue;
        if (!column_usable(left, c) || !column_usable(t, *rc)) continue;
        keys.push_back(c);
      }
      if (!keys.empty()) options.emplace_back(t, std::move(keys));
    }
    if (options.empty()) throw Unsatisfied{"JOIN_TABLE"};
    const auto& [right, keys] = options[rng_.below(options.size())];
    set_table("JOIN_TABLE", right);
    const std::string& key = schema().tables()[left].columns[keys[rng_.below(keys.size())]].name;
    b_["JOIN_KEY"] = {key, key, {}};
  }

  std::vector<std::string> allowed_ops(const std::string& name, std::span<const std::string_view> all) const {
    const SlotConstraint* c = t_.constraint(name);
    if (c && !c->ops.empty()) return c->ops;
    return {all.begin(), all.end()};
  }

  void bind_ops(const std::string& name, const std::vector<std::string>& ops) {
    if (ops.empty()) throw Unsatisfied{name};
    const std::string& op = ops[rng_.below(ops.size())];
    b_[name] = {op, std::string(agg_op_nl(op)), {}};
  }

  std::vector<std::size_t> column_candidates(const std::string& name, std::size_t table,
                                             const std::vector<Attribute>& attrs) {
    const SlotConstraint* c = t_.constraint(name);
    const auto& cols = schema().tables()[table].columns;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (!attrs.empty() && std::find(attrs.begin(), attrs.end(), cols[i].attribute) == attrs.end()) continue;
      if (c && !c->columns.empty() && !has(c->columns, cols[i].name)) continue;
      bool taken = false;
      for (const auto& entry : columns_) {
        if (entry.second == std::make_pair(table, i)) taken = true;
      }
      if (taken || !column_usable(table, i)) continue;
      out.push_back(i);
    }
    return out;
  }

  void bind_column(const std::string& name, SlotKind kind) {
    const SlotConstraint* c = t_.constraint(name);
    const std::string owner = c && !c->of.empty() ? c->of : "TABLE";
    if (!tables_.count(owner)) throw Unsatisfied{name};
    const std::size_t table = tables_.at(owner);
    std::vector<Attribute> attrs = c ? c->attributes : std::vector<Attribute>{};
    const std::string sfx = suffix_of(name);
    if (attrs.empty() && kind == SlotKind::kCondColumn &&
        (has(slots_, "TIME_LO" + sfx) || has(slots_, "TIME_HI" + sfx))) {
      attrs = {Attribute::kTime};
    }
    if (attrs.empty() && kind == SlotKind::kOrderColumn) attrs = {Attribute::kNumber, Attribute::kTime};

    std::vector<std::size_t> cands;
    const std::string op_slot = "AGG_OP" + sfx;
    if (kind == SlotKind::kAggColumn && has(slots_, op_slot)) {
      auto ops = allowed_ops(op_slot, kAggOps);
      rng_.shuffle(ops);
      for (const auto& op : ops) {
        auto op_attrs = agg_attributes(op);
        if (!attrs.empty()) {
          std::erase_if(op_attrs, [&](Attribute a) { return std::find(attrs.begin(), attrs.end(), a) == attrs.end(); });
        }
        cands = column_candidates(name, table, op_attrs);
        if (!cands.empty()) {
          b_[op_slot] = {op, std::string(agg_op_nl(op)), {}};
          break;
        }
      }
      if (cands.empty()) throw Unsatisfied{op_slot};
    } else {
      cands = column_candidates(name, table, attrs);
    }
    if (cands.empty()) throw Unsatisfied{name};
    const std::size_t col = cands[rng_.below(cands.size())];
    columns_[name] = {table, col};
    const std::string& cname = schema().tables()[table].columns[col].name;
    b_[name] = {cname, cname, {}};
  }

  // Column a value-like slot (COND_VALUE, TIME_*) talks about.
  std::pair<std::size_t, std::size_t> value_column(const std::string& name) {
    const SlotConstraint* c = t_.constraint(name);
    const std::string col_slot = c && !c->of.empty() ? c->of : "COND_COLUMN" + suffix_of(name);
    auto it = columns_.find(col_slot);
    if (it == columns_.end()) throw Unsatisfied{name};
    return it->second;
  }

  void bind_cond_op(const std::string& name) {
    const std::string sfx = suffix_of(name);
    std::optional<std::pair<std::size_t, std::size_t>> col;
    const SlotConstraint* c = t_.constraint(name);
    if (c && !c->of.empty()) {
      col = value_column(name);
    } else if (has(slots_, "COND_VALUE" + sfx)) {
      col = value_column("COND_VALUE" + sfx);
    } else if (auto it = columns_.find("COND_COLUMN" + sfx); it != columns_.end()) {
      col = it->second;
    }
    bool ordered = true;
    if (col) {
      const Attribute a = schema().tables()[col->first].columns[col->second].attribute;
      ordered = a == Attribute::kNumber || a == Attribute::kTime;
    }
    std::vector<std::string> usable;
    for (const auto& op : allowed_ops(name, kCondOps)) {
      if (ordered || op == "=" || op == "!=") usable.push_back(op);
    }
    if (usable.empty()) throw Unsatisfied{name};
    const std::string& op = usable[rng_.below(usable.size())];
    b_[name] = {op, std::string(cond_op_nl(op)), {}};
  }

  void bind_value(const std::string& name) {
    auto [table, col] = value_column(name);
    const auto& vals = inst_.values(table, col);
    if (vals.empty()) throw Unsatisfied{name};
    const Value& v = vals[rng_.below(vals.size())];
    b_[name] = {sql_literal(v), nl_value(v), {}};
  }

  void bind_times() {
    for (const auto& name : slots_) {
      auto kind = kind_of(name);
      if (kind != SlotKind::kTimeLo && kind != SlotKind::kTimeHi) continue;
      if (b_.count(name)) continue;
      const std::string sfx = suffix_of(name);
      auto [table, col] = value_column(name);
      if (schema().tables()[table].columns[col].attribute != Attribute::kTime) throw Unsatisfied{name};
      const auto& vals = inst_.values(table, col);
      if (vals.empty()) throw Unsatisfied{name};
      constexpr Micros kSecond = 1000000;
      Micros lo = vals[rng_.below(vals.size())].as_time();
      Micros hi = vals[rng_.below(vals.size())].as_time();
      if (hi < lo) std::swap(lo, hi);
      lo -= ((lo % kSecond) + kSecond) % kSecond;
      hi += (kSecond - ((hi % kSecond) + kSecond) % kSecond) % kSecond;
      if (hi == lo) hi += 3600 * kSecond;
      const Value vlo = Value::time(lo), vhi = Value::time(hi);
      if (has(slots_, "TIME_LO" + sfx)) b_["TIME_LO" + sfx] = {sql_literal(vlo), nl_value(vlo), {}};
      if (has(slots_, "TIME_HI" + sfx)) b_["TIME_HI" + sfx] = {sql_literal(vhi), nl_value(vhi), {}};
    }
  }

  Instantiator& inst_;
  const QueryTemplate& t_;
  Rng& rng_;
  std::vector<std::string> slots_;
  Bindings b_;
  std::map<std::string, std::size_t> tables_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> columns_;
};

}  // namespace

TextSqlPair Instantiator::instantiate(const QueryTemplate& t, Rng& rng, Bindings* bindings_out) {
  const auto& schema = db_.schema();
  std::vector<std::size_t> tables;
  const SlotConstraint* tc = t.constraint("TABLE");
  for (std::size_t i = 0; i < schema.tables().size(); ++i) {
    if (db_.rows(i).empty()) continue;
    if (tc && !tc->tables.empty()) {
      const std::string key = store::table_key(schema.tables()[i].name);
      if (std::none_of(tc->tables.begin(), tc->tables.end(), [&](const auto& n) { return store::table_key(n) == key; })) {
        continue;
      }
    }
    tables.push_back(i);
  }
  rng.shuffle(tables);
  std::string last = "TABLE";
  for (std::size_t table : tables) {
    Binder binder(*this, t, rng);
    Bindings b;
    try {
      b = binder.bind(table);
    } catch (const Unsatisfied& u) {
      last = u.slot;
      continue;
    }
    TextSqlPair pair;
    pair.sql = substitute(t.sql_pattern, b, true);
    pair.question = realize_question(t, b, rng.below(t.nl_patterns.size()));
    pair.template_id = t.id;
    pair.category = t.category;
    db_.execute(pair.sql);
    pair.tables_referenced = db_.referenced_tables(pair.sql);
    if (bindings_out) *bindings_out = std::move(b);
    return pair;
  }
  throw Error(Errc::kUnsatisfiableSlot, "template " + t.id + ": cannot bind $" + last);
}

TextSqlPair instantiate(const QueryTemplate& t, const store::Database& db, Rng& rng) {
  Instantiator inst(db);
  return inst.instantiate(t, rng);
}

namespace {

bool is_time_column(const store::sql::Expr& e, const std::vector<const store::TableSchema*>& tables) {
  if (e.kind != store::sql::ExprKind::kColumn) return false;
  for (const auto* t : tables) {
    if (auto c = t->column_index(e.name); c && t->columns[*c].attribute == Attribute::kTime) return true;
  }
  return false;
}

bool expr_has_time_predicate(const store::sql::Expr* e, const std::vector<const store::TableSchema*>& tables,
                             const store::DatabaseSchema& schema);

bool stmt_has_time_predicate(const store::sql::SelectStmt& s, const store::DatabaseSchema& schema) {
  std::vector<const store::TableSchema*> tables;
  auto add = [&](const std::string& name) {
    if (auto i = schema.find_table(name)) tables.push_back(&schema.tables()[*i]);
  };
  if (s.from) add(s.from->name);
  for (const auto& j : s.joins) add(j.table.name);
  return expr_has_time_predicate(s.where.get(), tables, schema) ||
         expr_has_time_predicate(s.having.get(), tables, schema);
}

bool expr_has_time_predicate(const store::sql::Expr* e, const std::vector<const store::TableSchema*>& tables,
                             const store::DatabaseSchema& schema) {
  using store::sql::ExprKind;
  if (!e) return false;
  switch (e->kind) {
    case ExprKind::kBinary:
      if (e->op == "AND" || e->op == "OR") break;
      if (e->op == "=" || e->op == "!=" || e->op == "<" || e->op == "<=" || e->op == ">" || e->op == ">=") {
        if (is_time_column(*e->args[0], tables) || is_time_column(*e->args[1], tables)) return true;
      }
      break;
    case ExprKind::kBetween:
    case ExprKind::kInList:
      if (is_time_column(*e->args[0], tables)) return true;
      break;
    default: break;
  }
  if (e->subquery && stmt_has_time_predicate(*e->subquery, schema)) return true;
  for (const auto& a : e->args) {
    if (expr_has_time_predicate(a.get(), tables, schema)) return true;
  }
  return false;
}

}  // namespace

bool has_datetime_predicate(std::string_view sql, const store::DatabaseSchema& schema) {
  auto stmt = store::sql::parse(sql);
  return stmt_has_time_predicate(*stmt, schema);
}

bool is_temporal(const QueryTemplate& t) {
  for (const auto& s : t.slots()) {
    if (s.starts_with("TIME_LO") || s.starts_with("TIME_HI")) return true;
  }
  return false;
}

namespace {

std::string pair_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%05zu", i);
  return buf;
}

struct Sampler {
  std::vector<const QueryTemplate*> templates;
  std::vector<double> cumulative;

  const QueryTemplate* pick(Rng& rng) const {
    const double x = rng.unit() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    if (it == cumulative.end()) --it;
    return templates[static_cast<std::size_t>(it - cumulative.begin())];
  }
  bool empty() const { return templates.empty(); }
};

Sampler make_sampler(const std::vector<QueryTemplate>& bank, const GeneratorConfig& config, bool temporal_only) {
  Sampler s;
  double total = 0.0;
  for (const auto& t : bank) {
    if (temporal_only && !is_temporal(t)) continue;
    auto it = config.template_weights.find(t.id);
    const double w = it == config.template_weights.end() ? 1.0 : it->second;
    if (!(w > 0.0)) continue;
    total += w;
    s.templates.push_back(&t);
    s.cumulative.push_back(total);
  }
  return s;
}

}  // namespace

std::vector<TextSqlPair> generate_corpus(const store::Database& db, const std::vector<QueryTemplate>& bank,
                                         const GeneratorConfig& config) {
  std::vector<TextSqlPair> out;
  if (config.n_pairs == 0) return out;
  const Sampler sampler = make_sampler(bank, config, false);
  if (sampler.empty()) throw Error(Errc::kUnsatisfiableSlot, "no template has positive weight");

  Instantiator inst(db);
  std::set<std::pair<std::string, std::string>> seen;
  auto draw = [&](const Sampler& from, std::uint64_t stream, std::size_t index) -> TextSqlPair {
    std::string last_error = "duplicates only";
    for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
      Rng rng(derive_seed(config.seed, {stream, index, attempt}));
      const QueryTemplate* t = from.pick(rng);
      TextSqlPair p;
      try {
        p = inst.instantiate(*t, rng);
      } catch (const Error& e) {
        if (e.code() != Errc::kUnsatisfiableSlot && e.code() != Errc::kTimeout) throw;
        last_error = e.what();
        continue;
      }
      if (seen.insert({p.question, p.sql}).second) {
        p.id = pair_id(index);
        return p;
      }
    }
    throw Error(Errc::kExhaustedResampling, "pair " + std::to_string(index) + " after " +
                                                std::to_string(config.max_attempts) + " attempts (" + last_error + ")");
  };
  for (std::size_t i = 0; i < config.n_pairs; ++i) out.push_back(draw(sampler, 0, i));

  bool time_data = false;
  for (std::size_t t = 0; t < db.schema().tables().size() && !time_data; ++t) {
    const auto& cols = db.schema().tables()[t].columns;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].attribute == Attribute::kTime && !inst.values(t, c).empty()) {
        time_data = true;
        break;
      }
    }
  }
  if (!time_data) return out;
  const auto target = static_cast<std::size_t>(std::ceil(config.temporal_floor * static_cast<double>(config.n_pairs) - 1e-9));
  std::size_t have = 0;
  std::vector<bool> temporal(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    temporal[i] = has_datetime_predicate(out[i].sql, db.schema());
    have += temporal[i];
  }
  const Sampler temporal_sampler = make_sampler(bank, config, true);
  if (temporal_sampler.empty()) return out;
  for (std::size_t i = out.size(); i-- > 0 && have < target;) {
    if (temporal[i]) continue;
    seen.erase({out[i].question, out[i].sql});
    out[i] = draw(temporal_sampler, 1, i);
    ++have;
  }
  return out;
}

}  // namespace iotsql::templates
