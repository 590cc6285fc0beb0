#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "iotsql/common/strings.hpp"

namespace iotsql::store {

// Column datatype as exposed to models and used for type checking on load.
enum class Attribute { kText, kNumber, kTime, kBoolean };

std::string_view attribute_name(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view s);

struct TimePoint {
  Micros us = 0;
  friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

// A cell value. Numbers keep their integer-ness so integer comparison stays exact.
class Value {
 public:
  using Storage = std::variant<std::monostate, std::string, std::int64_t, double, TimePoint, bool>;

  Value() = default;
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(std::int64_t i) : v_(i) {}
  Value(int i) : v_(static_cast<std::int64_t>(i)) {}
  Value(double d) : v_(d) {}
  Value(TimePoint t) : v_(t) {}
  Value(bool b) : v_(b) {}

  static Value null() { return Value(); }
  static Value time(Micros us) { return Value(TimePoint{us}); }

  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_double() const { return std::holds_alternative<double>(v_); }
  bool is_number() const { return is_int() || is_double(); }
  bool is_time() const { return std::holds_alternative<TimePoint>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }

  const std::string& text() const { return std::get<std::string>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  double as_double() const { return is_int() ? static_cast<double>(as_int()) : std::get<double>(v_); }
  Micros as_time() const { return std::get<TimePoint>(v_).us; }
  bool as_bool() const { return std::get<bool>(v_); }

  // The attribute this value can be stored under; nullopt for null.
  std::optional<Attribute> attribute() const;

  const Storage& storage() const { return v_; }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  Storage v_;
};

using Row = std::vector<Value>;

// Human-readable rendering; null renders as "NULL".
std::string render(const Value& v);

// Parses the canonical text form of a value of the given attribute.
std::optional<Value> parse_value(std::string_view text, Attribute a);

// Exact identity key: equal keys <=> values are the same datum. Integral
// doubles share the key of the equivalent integer.
std::string identity_key(const Value& v);

// Three-way comparison for SQL predicates. Coerces text to number/time when
// compared against those types. Floats compare equal within relative `rel_tol`.
// nullopt when either side is null or the two are incomparable.
std::optional<int> sql_compare(const Value& a, const Value& b, double rel_tol);

// Total order used for ORDER BY, MIN and MAX: null < bool < number < time < text.
int order_compare(const Value& a, const Value& b);

// Equality for result comparison: exact for text/time/bool, numbers within
// relative tolerance, null equals null.
bool result_equal(const Value& a, const Value& b, double rel_tol);

}  // namespace iotsql::store
