#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "iotsql/ingest/records.hpp"
#include "iotsql/ingest/zeek.hpp"

namespace iotsql::ingest {

struct SynthSpec {
  std::size_t conn = 2000;
  std::size_t dns = 400;
  std::size_t http = 300;
  std::size_t files = 200;
  std::size_t ntp = 150;
  std::size_t weird = 150;
  std::size_t readings_per_sensor = 300;  // per sensor type
  std::size_t rooms = 51;
  std::size_t address_pool = 64;  // internal device addresses
  std::map<AttackLabel, double> label_mix;
  Micros start = 0;
  Micros window = 0;
  std::uint64_t seed = 7;

  // Mix resembling IoT-23 (mostly scans, Okiru and benign traffic) over one week of 2023-03.
  static SynthSpec defaults();
};

// Throws InvalidSpec naming the problem.
void validate(const SynthSpec& spec);

struct DeviceRow {
  std::string ip, mac, room;
  std::int64_t floor = 0;
  std::string device_type, vendor, firmware;
  Micros first_seen = 0;
};

struct SynthOutput {
  std::vector<ConnRecord> conn;
  std::map<LogKind, ParsedLog> logs;  // dns, http, files, ntp, weird
  std::map<SensorType, std::vector<SensorReading>> sensors;
  std::vector<DeviceRow> devices;
};

// Per-label counts by largest remainder: each within 1 of fraction * n.
std::map<AttackLabel, std::size_t> label_counts(const std::map<AttackLabel, double>& mix, std::size_t n);

// Deterministic in spec (including seed). Auxiliary log rows reuse the uid and
// endpoints of conn records so they join on uid.
SynthOutput synthesize_logs(const SynthSpec& spec);

// Layout: logs/<kind>.log, sensors/<type>.csv, devices.csv.
void write_synth(const std::filesystem::path& dir, const SynthOutput& out, Micros open_time);

}  // namespace iotsql::ingest
