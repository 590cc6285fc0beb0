#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iotsql {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on every occurrence of sep; empty fields are kept.
std::vector<std::string> split(std::string_view s, std::string_view sep);

// Splits on runs of spaces/tabs; no empty fields.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);

// Strict parsers: the whole string must be consumed.
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// Shortest representation that round-trips through parse_double.
std::string format_double(double v);

// Fixed-point with `digits` decimals, as Zeek prints intervals and times.
std::string format_fixed(double v, int digits);

// Microseconds since the Unix epoch, UTC.
using Micros = std::int64_t;

// Accepts "YYYY-MM-DD", "YYYY-MM-DD[ T]HH:MM[:SS[.ffffff]]" with optional "Z".
std::optional<Micros> parse_iso_time(std::string_view s);

// "YYYY-MM-DD HH:MM:SS" with ".ffffff" appended when sub-second.
std::string format_iso_time(Micros t);

// Zeek epoch-seconds notation, e.g. "1525879831.015811".
std::optional<Micros> parse_epoch_seconds(std::string_view s);
std::string format_epoch_seconds(Micros t);

}  // namespace iotsql
