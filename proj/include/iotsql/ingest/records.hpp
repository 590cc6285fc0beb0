#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "iotsql/common/strings.hpp"
#include "iotsql/store/value.hpp"

namespace iotsql::ingest {

enum class AttackLabel {
  kAttack,
  kBenign,
  kCandC,
  kDDoS,
  kFileDownload,
  kHeartBeat,
  kMirai,
  kOkiru,
  kTorii,
  kPartOfAHorizontalPortScan,
};

inline constexpr std::array<AttackLabel, 10> kAllLabels = {
    AttackLabel::kAttack,       AttackLabel::kBenign,    AttackLabel::kCandC, AttackLabel::kDDoS,
    AttackLabel::kFileDownload, AttackLabel::kHeartBeat, AttackLabel::kMirai, AttackLabel::kOkiru,
    AttackLabel::kTorii,        AttackLabel::kPartOfAHorizontalPortScan};

// Canonical identifier: "CandC", "PartOfAHorizontalPortScan", ...
std::string_view label_name(AttackLabel label);

// Spelling used in IoT-23 label columns ("C&C" for command and control).
std::string_view label_iot23_name(AttackLabel label);

// Maps an IoT-23 (label, detailed-label) pair to the ten-way taxonomy.
// Case- and spacing-tolerant. Compound details such as "C&C-HeartBeat" resolve
// to their most specific component. Throws UnknownLabel.
AttackLabel parse_iot23_label(std::string_view raw_label, std::string_view raw_detail);

// One Zeek conn.log session.
struct ConnRecord {
  Micros ts = 0;
  std::string uid;
  std::string orig_h;
  std::int64_t orig_p = 0;
  std::string resp_h;
  std::int64_t resp_p = 0;
  std::string proto;
  std::optional<std::string> service;
  std::optional<double> duration;
  std::optional<std::int64_t> orig_bytes;
  std::optional<std::int64_t> resp_bytes;
  std::string conn_state;
  std::optional<bool> local_orig;
  std::optional<bool> local_resp;
  std::int64_t missed_bytes = 0;
  // Zeek leaves history unset for some states, so it is optional here.
  std::optional<std::string> history;
  std::int64_t orig_pkts = 0;
  std::int64_t orig_ip_bytes = 0;
  std::int64_t resp_pkts = 0;
  std::int64_t resp_ip_bytes = 0;
  std::optional<std::string> tunnel_parents;
  AttackLabel label = AttackLabel::kBenign;
  bool is_malicious = false;

  friend bool operator==(const ConnRecord&, const ConnRecord&) = default;
};

// The 21 conn.log columns in schema order.
inline constexpr std::array<std::string_view, 21> kConnColumns = {
    "ts",         "uid",        "orig_h",       "orig_p",       "resp_h",     "resp_p",
    "proto",      "service",    "duration",     "orig_bytes",   "resp_bytes", "conn_state",
    "local_orig", "local_resp", "missed_bytes", "history",      "orig_pkts",  "orig_ip_bytes",
    "resp_pkts",  "resp_ip_bytes", "tunnel_parents"};

// Zeek text rendering of each of the 21 columns; nullopt where unset.
std::array<std::optional<std::string>, 21> conn_fields(const ConnRecord& r);

// Typed database row for conn.log (21 values, nulls where unset).
store::Row conn_row(const ConnRecord& r);

// Empty when the record satisfies its invariants, else a description.
std::string conn_violation(const ConnRecord& r);

enum class SensorType { kHumidity, kCo2, kTemperature, kLuminosity, kMotion };

inline constexpr std::array<SensorType, 5> kAllSensorTypes = {
    SensorType::kHumidity, SensorType::kCo2, SensorType::kTemperature, SensorType::kLuminosity,
    SensorType::kMotion};

// Table name: "humidity", "co2", "temperature", "luminosity", "motion".
std::string_view sensor_name(SensorType t);
std::optional<SensorType> parse_sensor_type(std::string_view s);
std::string_view sensor_unit(SensorType t);

struct SensorReading {
  SensorType sensor_type = SensorType::kTemperature;
  std::string room;
  Micros ts = 0;
  double value = 0.0;

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

}  // namespace iotsql::ingest
