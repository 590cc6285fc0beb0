#include "iotsql/ingest/sensors.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::ingest {

std::vector<SensorReading> ingest_sensors(std::istream& in, SensorType type) {
  std::vector<SensorReading> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto cells = split(line, ",");
    const std::string where = "line " + std::to_string(line_no);
    if (cells.size() != 3) throw Error(Errc::kBadValue, where + ": expected room,ts,value");
    SensorReading r;
    r.sensor_type = type;
    r.room = std::string(trim(cells[0]));
    if (r.room.empty()) throw Error(Errc::kBadValue, where + ": empty room");
    const std::string_view ts = trim(cells[1]);
    auto t = parse_iso_time(ts);
    if (!t) t = parse_epoch_seconds(ts);
    if (!t) throw Error(Errc::kBadTimestamp, where + ": '" + std::string(ts) + "'");
    r.ts = *t;
    auto v = parse_double(trim(cells[2]));
    if (!v || !std::isfinite(*v)) throw Error(Errc::kBadValue, where + ": '" + cells[2] + "'");
    if (type == SensorType::kMotion && *v != 0.0 && *v != 1.0) {
      throw Error(Errc::kBadValue, where + ": motion must be 0 or 1, got " + cells[2]);
    }
    r.value = *v;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SensorReading> ingest_sensors(std::string_view text, SensorType type) {
  std::istringstream in{std::string(text)};
  return ingest_sensors(in, type);
}

void write_sensors(std::ostream& out, const std::vector<SensorReading>& readings) {
  out << "room,ts,value\n";
  for (const auto& r : readings) {
    out << r.room << ',' << format_iso_time(r.ts) << ',' << format_double(r.value) << '\n';
  }
}

std::optional<std::int64_t> room_floor(std::string_view room) {
  std::size_t i = 0;
  while (i < room.size() && !std::isdigit(static_cast<unsigned char>(room[i]))) ++i;
  std::size_t j = i;
  while (j < room.size() && std::isdigit(static_cast<unsigned char>(room[j]))) ++j;
  if (j - i < 3) return std::nullopt;
  auto n = parse_int(room.substr(i, j - i));
  if (!n) return std::nullopt;
  return *n / 100;
}

store::Row sensor_row(const SensorReading& r, std::int64_t reading_id) {
  using store::Value;
  auto floor = room_floor(r.room);
  Value value = r.value == std::floor(r.value) && std::fabs(r.value) < 9e15
                    ? Value(static_cast<std::int64_t>(r.value))
                    : Value(r.value);
  return {Value(reading_id),
          Value(std::string(sensor_name(r.sensor_type)) + "-" + r.room),
          Value(r.room),
          floor ? Value(*floor) : Value::null(),
          Value::time(r.ts),
          value,
          Value(std::string(sensor_unit(r.sensor_type)))};
}

}  // namespace iotsql::ingest
