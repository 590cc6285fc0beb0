#include "iotsql/ingest/loader.hpp"

#include <fstream>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/ingest/sensors.hpp"

namespace iotsql::ingest {

using store::Attribute;
using store::Value;

Value field_value(const Field& f, Attribute a) {
  if (!f) return Value::null();
  std::string_view s = *f;
  if (a == Attribute::kText) return Value(std::string(s));
  if (s.empty()) return Value::null();
  if (a != Attribute::kTime) {
    if (auto comma = s.find(','); comma != std::string_view::npos) s = s.substr(0, comma);
  }
  switch (a) {
    case Attribute::kNumber: {
      if (auto i = parse_int(s)) return Value(*i);
      if (auto d = parse_double(s)) {
        // Zeek prints whole TTLs as "60.000000".
        if (*d == static_cast<double>(static_cast<std::int64_t>(*d)) && s.find_first_of("eE") == std::string_view::npos) {
          return Value(static_cast<std::int64_t>(*d));
        }
        return Value(*d);
      }
      break;
    }
    case Attribute::kTime: {
      if (auto t = parse_epoch_seconds(s)) return Value::time(*t);
      if (auto t = parse_iso_time(s)) return Value::time(*t);
      break;
    }
    case Attribute::kBoolean: {
      if (s == "T" || iequals(s, "true")) return Value(true);
      if (s == "F" || iequals(s, "false")) return Value(false);
      break;
    }
    case Attribute::kText: break;
  }
  throw Error(Errc::kBadValue, "'" + std::string(s) + "' is not a valid " + std::string(attribute_name(a)));
}

std::size_t load_log(store::Database& db, const ParsedLog& log) {
  const std::string table = std::string(log_kind_name(log.kind)) + ".log";
  if (log.kind == LogKind::kConn) {
    std::vector<store::Row> rows;
    rows.reserve(log.conn.size());
    for (const auto& r : log.conn) rows.push_back(conn_row(r));
    return db.load_records(table, std::move(rows));
  }
  const auto& schema = db.schema().tables()[*db.schema().find_table(table)];
  std::vector<std::optional<std::size_t>> source;
  for (const auto& c : schema.columns) source.push_back(log.field_index(c.name));
  std::vector<store::Row> rows;
  rows.reserve(log.rows.size());
  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    store::Row row;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      if (!source[c]) {
        row.push_back(Value::null());
        continue;
      }
      try {
        row.push_back(field_value(log.rows[r][*source[c]], schema.columns[c].attribute));
      } catch (const Error& e) {
        throw Error(Errc::kBadValue, table + " line " + std::to_string(log.row_lines[r]) + ", " +
                                         schema.columns[c].name + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return db.load_records(table, std::move(rows));
}

std::vector<DeviceRow> parse_devices(std::istream& in) {
  std::vector<DeviceRow> out;
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
    auto c = split(line, ",");
    const std::string where = "devices line " + std::to_string(line_no);
    if (c.size() != 8) throw Error(Errc::kBadValue, where + ": expected 8 fields");
    DeviceRow d{c[0], c[1], c[2], 0, c[4], c[5], c[6], 0};
    auto floor = parse_int(c[3]);
    if (!floor) throw Error(Errc::kBadValue, where + ": floor '" + c[3] + "'");
    d.floor = *floor;
    auto t = parse_iso_time(c[7]);
    if (!t) throw Error(Errc::kBadTimestamp, where + ": '" + c[7] + "'");
    d.first_seen = *t;
    out.push_back(std::move(d));
  }
  return out;
}

std::size_t load_devices(store::Database& db, const std::vector<DeviceRow>& devices) {
  std::vector<store::Row> rows;
  for (const auto& d : devices) {
    rows.push_back({Value(d.ip), Value(d.mac), Value(d.room), Value(d.floor), Value(d.device_type),
                    Value(d.vendor), Value(d.firmware), Value::time(d.first_seen)});
  }
  return db.load_records("devices", std::move(rows));
}

std::size_t load_sensors(store::Database& db, SensorType type, const std::vector<SensorReading>& readings) {
  const std::string table(sensor_name(type));
  std::vector<store::Row> rows;
  auto next_id = static_cast<std::int64_t>(db.row_count(table)) + 1;
  for (const auto& r : readings) rows.push_back(sensor_row(r, next_id++));
  return db.load_records(table, std::move(rows));
}

store::Database load_directory(const std::filesystem::path& dir, IngestReport* report) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::kIo, "not a directory: " + dir.string());
  store::Database db(store::default_schema());
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  auto open = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::kIo, "cannot read " + p.string());
    return f;
  };
  for (LogKind kind : kAllLogKinds) {
    const std::string name = std::string(log_kind_name(kind)) + ".log";
    fs::path p = dir / "logs" / name;
    if (!fs::exists(p)) p = dir / name;
    if (!fs::exists(p)) continue;
    auto f = open(p);
    ParsedLog log = parse_zeek(f, kind);
    for (const auto& e : log.errors) {
      rep.problems.push_back(p.filename().string() + ":" + std::to_string(e.line) + ": " + e.message);
    }
    rep.rows[name] = load_log(db, log);
  }
  for (SensorType t : kAllSensorTypes) {
    const fs::path p = dir / "sensors" / (std::string(sensor_name(t)) + ".csv");
    if (!fs::exists(p)) continue;
    auto f = open(p);
    rep.rows[std::string(sensor_name(t))] = load_sensors(db, t, ingest_sensors(f, t));
  }
  if (fs::exists(dir / "devices.csv")) {
    auto f = open(dir / "devices.csv");
    rep.rows["devices"] = load_devices(db, parse_devices(f));
  }
  return db;
}

store::Database database_from_synth(const SynthOutput& out) {
  store::Database db(store::default_schema());
  ParsedLog conn;
  conn.kind = LogKind::kConn;
  conn.conn = out.conn;
  load_log(db, conn);
  for (const auto& [kind, log] : out.logs) load_log(db, log);
  for (const auto& [type, readings] : out.sensors) load_sensors(db, type, readings);
  load_devices(db, out.devices);
  return db;
}

}  // namespace iotsql::ingest
