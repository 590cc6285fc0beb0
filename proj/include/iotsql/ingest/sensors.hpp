#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/ingest/records.hpp"
#include "iotsql/store/value.hpp"

namespace iotsql::ingest {

// Sensor CSV: a header line, then `room,ts,value` rows. ts is ISO-8601 or
// Zeek epoch seconds. Throws BadTimestamp / BadValue naming the line.
std::vector<SensorReading> ingest_sensors(std::istream& in, SensorType type);
std::vector<SensorReading> ingest_sensors(std::string_view text, SensorType type);

void write_sensors(std::ostream& out, const std::vector<SensorReading>& readings);

// Floor of a room: leading digits / 100 for rooms like "R312" or "312".
std::optional<std::int64_t> room_floor(std::string_view room);

// Row for a sensor table: reading_id, sensor_id, room, floor, ts, value, unit.
store::Row sensor_row(const SensorReading& r, std::int64_t reading_id);

}  // namespace iotsql::ingest
