#include "iotsql/store/value.hpp"

#include <cmath>

namespace iotsql::store {

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kText: return "text";
    case Attribute::kNumber: return "number";
    case Attribute::kTime: return "time";
    case Attribute::kBoolean: return "boolean";
  }
  return "text";
}

std::optional<Attribute> parse_attribute(std::string_view s) {
  std::string l = to_lower(s);
  if (l == "text") return Attribute::kText;
  if (l == "number") return Attribute::kNumber;
  if (l == "time") return Attribute::kTime;
  if (l == "boolean") return Attribute::kBoolean;
  return std::nullopt;
}

std::optional<Attribute> Value::attribute() const {
  if (is_text()) return Attribute::kText;
  if (is_number()) return Attribute::kNumber;
  if (is_time()) return Attribute::kTime;
  if (is_bool()) return Attribute::kBoolean;
  return std::nullopt;
}

std::string render(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_text()) return v.text();
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_double()) return format_double(v.as_double());
  if (v.is_time()) return format_iso_time(v.as_time());
  return v.as_bool() ? "true" : "false";
}

std::optional<Value> parse_value(std::string_view text, Attribute a) {
  switch (a) {
    case Attribute::kText:
      return Value(std::string(text));
    case Attribute::kNumber:
      if (auto i = parse_int(text)) return Value(*i);
      if (auto d = parse_double(text)) return Value(*d);
      return std::nullopt;
    case Attribute::kTime:
      if (auto t = parse_iso_time(text)) return Value::time(*t);
      return std::nullopt;
    case Attribute::kBoolean: {
      std::string l = to_lower(text);
      if (l == "true" || l == "t" || l == "1") return Value(true);
      if (l == "false" || l == "f" || l == "0") return Value(false);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

bool integral_double(double d) {
  return std::isfinite(d) && d == std::trunc(d) && std::fabs(d) < 9.0e15;
}

// Number view of a value if it has one (bools count as 0/1, text if numeric).
std::optional<Value> as_numeric(const Value& v) {
  if (v.is_number()) return v;
  if (v.is_bool()) return Value(static_cast<std::int64_t>(v.as_bool()));
  if (v.is_text()) {
    std::string_view t = trim(v.text());
    if (auto i = parse_int(t)) return Value(*i);
    if (auto d = parse_double(t)) return Value(*d);
  }
  return std::nullopt;
}

int compare_numbers(const Value& a, const Value& b, double rel_tol) {
  if (a.is_int() && b.is_int()) {
    return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
  }
  const double x = a.as_double();
  const double y = b.as_double();
  if (std::fabs(x - y) <= rel_tol * std::max(std::fabs(x), std::fabs(y))) return 0;
  return x < y ? -1 : 1;
}

int rank(const Value& v) {
  if (v.is_null()) return 0;
  if (v.is_bool()) return 1;
  if (v.is_number()) return 2;
  if (v.is_time()) return 3;
  return 4;
}

}  // namespace

std::string identity_key(const Value& v) {
  if (v.is_null()) return "N";
  if (v.is_text()) return "S" + v.text();
  if (v.is_int()) return "I" + std::to_string(v.as_int());
  if (v.is_double()) {
    double d = v.as_double();
    if (integral_double(d)) return "I" + std::to_string(static_cast<std::int64_t>(d));
    return "D" + format_double(d);
  }
  if (v.is_time()) return "T" + std::to_string(v.as_time());
  return v.as_bool() ? "B1" : "B0";
}

std::optional<int> sql_compare(const Value& a, const Value& b, double rel_tol) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_time() || b.is_time()) {
    auto to_time = [](const Value& v) -> std::optional<Micros> {
      if (v.is_time()) return v.as_time();
      if (v.is_text()) return parse_iso_time(v.text());
      return std::nullopt;
    };
    auto x = to_time(a);
    auto y = to_time(b);
    if (!x || !y) return std::nullopt;
    return *x < *y ? -1 : (*x > *y ? 1 : 0);
  }
  if (a.is_text() && b.is_text()) {
    int c = a.text().compare(b.text());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  auto x = as_numeric(a);
  auto y = as_numeric(b);
  if (!x || !y) return std::nullopt;
  return compare_numbers(*x, *y, rel_tol);
}

int order_compare(const Value& a, const Value& b) {
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0: return 0;
    case 1: return static_cast<int>(a.as_bool()) - static_cast<int>(b.as_bool());
    case 2: return compare_numbers(a, b, 0.0);
    case 3: return a.as_time() < b.as_time() ? -1 : (a.as_time() > b.as_time() ? 1 : 0);
    default: {
      int c = a.text().compare(b.text());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
}

bool result_equal(const Value& a, const Value& b, double rel_tol) {
  if (a.is_number() && b.is_number()) return compare_numbers(a, b, rel_tol) == 0;
  return a == b;
}

}  // namespace iotsql::store
