#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "iotsql/ingest/synth.hpp"
#include "iotsql/ingest/zeek.hpp"
#include "iotsql/store/database.hpp"

namespace iotsql::ingest {

// Zeek cell -> typed value: "-" is null, time accepts epoch seconds or ISO,
// set-valued numbers keep their first element. Throws BadValue.
store::Value field_value(const Field& f, store::Attribute a);

// Appends a parsed log to its table; returns rows inserted.
std::size_t load_log(store::Database& db, const ParsedLog& log);

std::vector<DeviceRow> parse_devices(std::istream& in);
std::size_t load_devices(store::Database& db, const std::vector<DeviceRow>& devices);
std::size_t load_sensors(store::Database& db, SensorType type, const std::vector<SensorReading>& readings);

struct IngestReport {
  std::map<std::string, std::size_t> rows;  // table -> rows loaded
  std::vector<std::string> problems;        // "<file>:<line>: <message>"
};

// Reads logs/<kind>.log, sensors/<type>.csv and devices.csv under dir (each optional).
store::Database load_directory(const std::filesystem::path& dir, IngestReport* report = nullptr);

store::Database database_from_synth(const SynthOutput& out);

}  // namespace iotsql::ingest
