#include "iotsql/templates/template.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "embedded_data.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::templates {

namespace {

constexpr std::array<std::pair<SlotKind, std::string_view>, 12> kSlotNames = {{
    {SlotKind::kAggOp, "AGG_OP"},
    {SlotKind::kAggColumn, "AGG_COLUMN"},
    {SlotKind::kTable, "TABLE"},
    {SlotKind::kCondColumn, "COND_COLUMN"},
    {SlotKind::kCondOp, "COND_OP"},
    {SlotKind::kCondValue, "COND_VALUE"},
    {SlotKind::kJoinTable, "JOIN_TABLE"},
    {SlotKind::kJoinKey, "JOIN_KEY"},
    {SlotKind::kLimitN, "LIMIT_N"},
    {SlotKind::kOrderColumn, "ORDER_COLUMN"},
    {SlotKind::kTimeLo, "TIME_LO"},
    {SlotKind::kTimeHi, "TIME_HI"},
}};

bool upper_or_underscore(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }

}  // namespace

std::string_view slot_kind_name(SlotKind k) {
  for (const auto& [kind, name] : kSlotNames) {
    if (kind == k) return name;
  }
  return "TABLE";
}

std::optional<SlotKind> parse_slot_kind(std::string_view s) {
  for (const auto& [kind, name] : kSlotNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string_view category_name(Category c) { return c == Category::kRetrieval ? "retrieval" : "reasoning"; }

std::optional<Category> parse_category(std::string_view s) {
  const std::string l = to_lower(trim(s));
  if (l == "retrieval") return Category::kRetrieval;
  if (l == "reasoning") return Category::kReasoning;
  return std::nullopt;
}

std::string Placeholder::name() const { return std::string(slot_kind_name(kind)) + suffix; }

std::vector<Placeholder> find_placeholders(std::string_view pattern) {
  std::vector<Placeholder> out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '$') continue;
    std::size_t j = i + 1;
    while (j < pattern.size() && upper_or_underscore(pattern[j])) ++j;
    Placeholder p;
    auto kind = parse_slot_kind(pattern.substr(i + 1, j - i - 1));
    if (!kind) {
      throw Error(Errc::kParseError, "unknown placeholder at offset " + std::to_string(i) + " in '" +
                                         std::string(pattern) + "'");
    }
    p.kind = *kind;
    std::size_t k = j;
    while (k < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[k]))) ++k;
    p.suffix = std::string(pattern.substr(j, k - j));
    if (k + 1 < pattern.size() && pattern[k] == ':' && std::islower(static_cast<unsigned char>(pattern[k + 1]))) {
      std::size_t m = k + 1;
      while (m < pattern.size() && std::islower(static_cast<unsigned char>(pattern[m]))) ++m;
      p.modifier = std::string(pattern.substr(k + 1, m - k - 1));
      if (p.modifier != "short") throw Error(Errc::kParseError, "unknown modifier ':" + p.modifier + "'");
      k = m;
    }
    p.offset = i;
    p.length = k - i;
    out.push_back(std::move(p));
    i = k - 1;
  }
  return out;
}

std::vector<std::string> QueryTemplate::slots() const {
  std::vector<std::string> out;
  for (const auto& p : find_placeholders(sql_pattern)) {
    std::string n = p.name();
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
  }
  return out;
}

const SlotConstraint* QueryTemplate::constraint(std::string_view name) const {
  auto it = constraints.find(std::string(name));
  return it == constraints.end() ? nullptr : &it->second;
}

namespace {

SlotConstraint parse_constraint(std::string_view spec, const std::string& where) {
  SlotConstraint c;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) { throw Error(Errc::kParseError, where + ": " + msg); };
  while (i < spec.size()) {
    while (i < spec.size() && spec[i] == ' ') ++i;
    if (i >= spec.size()) break;
    const std::size_t eq = spec.find('=', i);
    if (eq == std::string_view::npos) fail("expected key=value");
    const std::string key(trim(spec.substr(i, eq - i)));
    std::vector<std::string> values;
    std::size_t next;
    if (eq + 1 < spec.size() && spec[eq + 1] == '[') {
      const std::size_t close = spec.find(']', eq + 2);
      if (close == std::string_view::npos) fail("unterminated '['");
      values = split_whitespace(spec.substr(eq + 2, close - eq - 2));
      next = close + 1;
    } else {
      std::size_t end = spec.find(' ', eq + 1);
      if (end == std::string_view::npos) end = spec.size();
      values.push_back(std::string(spec.substr(eq + 1, end - eq - 1)));
      next = end;
    }
    if (key == "attr") {
      for (const auto& v : values) {
        auto a = store::parse_attribute(v);
        if (!a) fail("unknown attribute '" + v + "'");
        c.attributes.push_back(*a);
      }
    } else if (key == "cols") {
      c.columns = values;
    } else if (key == "tables") {
      c.tables = values;
    } else if (key == "ops") {
      c.ops = values;
    } else if (key == "of") {
      c.of = values.at(0);
    } else if (key == "range") {
      auto parts = split(values.at(0), "..");
      std::optional<std::int64_t> lo, hi;
      if (parts.size() == 2) {
        lo = parse_int(parts[0]);
        hi = parse_int(parts[1]);
      }
      if (!lo || !hi || *lo > *hi) fail("bad range '" + values.at(0) + "'");
      c.lo = *lo;
      c.hi = *hi;
    } else {
      fail("unknown constraint key '" + key + "'");
    }
    i = next;
  }
  return c;
}

void check_template(const QueryTemplate& t, const std::string& where) {
  auto fail = [&](const std::string& msg) { throw Error(Errc::kParseError, where + " " + t.id + ": " + msg); };
  if (t.sql_pattern.empty()) fail("missing sql");
  if (t.nl_patterns.size() < 3) fail("needs at least 3 nl patterns");
  const auto slots = t.slots();
  for (const auto& nl : t.nl_patterns) {
    for (const auto& p : find_placeholders(nl)) {
      if (std::find(slots.begin(), slots.end(), p.name()) == slots.end()) {
        fail("nl placeholder $" + p.name() + " is not in the sql pattern");
      }
    }
  }
  for (const auto& [name, c] : t.constraints) {
    if (std::find(slots.begin(), slots.end(), name) == slots.end()) fail("constraint on unused slot " + name);
    if (!c.of.empty() && std::find(slots.begin(), slots.end(), c.of) == slots.end()) {
      fail("slot " + name + " refers to unused slot " + c.of);
    }
  }
}

}  // namespace

std::vector<QueryTemplate> parse_template_bank(std::string_view text) {
  std::vector<QueryTemplate> out;
  std::optional<QueryTemplate> cur;
  std::size_t start_line = 0;
  auto flush = [&]() {
    if (!cur) return;
    check_template(*cur, "template at line " + std::to_string(start_line));
    for (const auto& t : out) {
      if (t.id == cur->id) throw Error(Errc::kParseError, "duplicate template id " + cur->id);
    }
    out.push_back(std::move(*cur));
    cur.reset();
  };
  std::size_t line_no = 0;
  for (const auto& raw : split(text, "\n")) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      flush();
      if (line.back() != ']' || line.size() < 3) throw Error(Errc::kParseError, where + ": bad header");
      cur.emplace();
      cur->id = std::string(line.substr(1, line.size() - 2));
      start_line = line_no;
      continue;
    }
    if (!cur) throw Error(Errc::kParseError, where + ": content before the first [id]");
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw Error(Errc::kParseError, where + ": expected key: value");
    const std::string key(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));
    if (key == "category") {
      auto c = parse_category(value);
      if (!c) throw Error(Errc::kParseError, where + ": unknown category '" + std::string(value) + "'");
      cur->category = *c;
    } else if (key == "sql") {
      cur->sql_pattern = std::string(value);
      find_placeholders(value);
    } else if (key == "nl") {
      cur->nl_patterns.push_back(std::string(value));
      find_placeholders(value);
    } else if (key == "slot") {
      const std::size_t sp = value.find(' ');
      const std::string name(value.substr(0, sp));
      auto ph = find_placeholders("$" + name);
      if (ph.size() != 1 || ph[0].length != name.size() + 1) {
        throw Error(Errc::kParseError, where + ": bad slot name '" + name + "'");
      }
      cur->constraints[name] = parse_constraint(sp == std::string_view::npos ? "" : value.substr(sp + 1), where);
    } else {
      throw Error(Errc::kParseError, where + ": unknown key '" + key + "'");
    }
  }
  flush();
  return out;
}

const std::vector<QueryTemplate>& default_bank() {
  static const std::vector<QueryTemplate> bank = parse_template_bank(embedded::kTemplateBank);
  return bank;
}

std::string substitute(std::string_view pattern, const Bindings& b, bool sql) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& p : find_placeholders(pattern)) {
    out.append(pattern.substr(pos, p.offset - pos));
    auto it = b.find(p.name());
    if (it == b.end()) throw Error(Errc::kUnboundPlaceholder, "$" + p.name());
    if (sql) {
      out += it->second.sql;
    } else if (p.modifier == "short") {
      out += it->second.nl_short.empty() ? it->second.nl : it->second.nl_short;
    } else {
      out += it->second.nl;
    }
    pos = p.offset + p.length;
  }
  out.append(pattern.substr(pos));
  return out;
}

std::string realize_question(const QueryTemplate& t, const Bindings& b, std::size_t variant) {
  if (variant >= t.nl_patterns.size()) {
    throw Error(Errc::kUnboundPlaceholder, "template " + t.id + " has no variant " + std::to_string(variant));
  }
  return substitute(t.nl_patterns[variant], b, false);
}

std::string table_nl(std::string_view table, bool short_form) {
  if (table.size() > 4 && table.ends_with(".log")) {
    std::string base = to_upper(table.substr(0, table.size() - 4));
    return short_form ? base : base + " LOGs";
  }
  return std::string(table);
}

std::string_view agg_op_nl(std::string_view op) {
  if (op == "AVG") return "average";
  if (op == "MIN") return "minimum";
  if (op == "MAX") return "maximum";
  if (op == "SUM") return "total";
  if (op == "COUNT") return "count of";
  return op;
}

std::string_view cond_op_nl(std::string_view op) {
  if (op == "=") return "equal to";
  if (op == "!=") return "not equal to";
  if (op == "<") return "less than";
  if (op == "<=") return "at most";
  if (op == ">") return "greater than";
  if (op == ">=") return "at least";
  return op;
}

}  // namespace iotsql::templates
