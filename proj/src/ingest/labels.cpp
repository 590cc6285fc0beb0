#include <algorithm>
#include <cctype>
#include <vector>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/ingest/records.hpp"

namespace iotsql::ingest {

std::string_view label_name(AttackLabel label) {
  switch (label) {
    case AttackLabel::kAttack: return "Attack";
    case AttackLabel::kBenign: return "Benign";
    case AttackLabel::kCandC: return "CandC";
    case AttackLabel::kDDoS: return "DDoS";
    case AttackLabel::kFileDownload: return "FileDownload";
    case AttackLabel::kHeartBeat: return "HeartBeat";
    case AttackLabel::kMirai: return "Mirai";
    case AttackLabel::kOkiru: return "Okiru";
    case AttackLabel::kTorii: return "Torii";
    case AttackLabel::kPartOfAHorizontalPortScan: return "PartOfAHorizontalPortScan";
  }
  return "Benign";
}

std::string_view label_iot23_name(AttackLabel label) {
  return label == AttackLabel::kCandC ? "C&C" : label_name(label);
}

namespace {

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '\t') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<AttackLabel> single_label(std::string_view part) {
  const std::string s = squash(part);
  if (s == "c&c" || s == "candc" || s == "cc") return AttackLabel::kCandC;
  for (AttackLabel l : kAllLabels) {
    if (s == to_lower(label_name(l))) return l;
  }
  return std::nullopt;
}

// Most specific first: named botnets and scans beat generic C&C / Attack.
constexpr std::array<AttackLabel, 9> kSpecificity = {
    AttackLabel::kPartOfAHorizontalPortScan, AttackLabel::kOkiru, AttackLabel::kMirai,
    AttackLabel::kTorii, AttackLabel::kDDoS, AttackLabel::kFileDownload, AttackLabel::kHeartBeat,
    AttackLabel::kCandC, AttackLabel::kAttack};

std::optional<AttackLabel> detail_label(std::string_view detail) {
  if (auto l = single_label(detail)) return l;
  std::vector<AttackLabel> parts;
  for (const auto& p : split(detail, "-")) {
    auto l = single_label(p);
    if (!l) return std::nullopt;
    parts.push_back(*l);
  }
  for (AttackLabel l : kSpecificity) {
    if (std::find(parts.begin(), parts.end(), l) != parts.end()) return l;
  }
  return std::nullopt;
}

}  // namespace

AttackLabel parse_iot23_label(std::string_view raw_label, std::string_view raw_detail) {
  const std::string label = squash(raw_label);
  const std::string_view detail = trim(raw_detail);
  const bool no_detail = detail.empty() || detail == "-" || detail == "(empty)";
  if (label == "benign") {
    if (no_detail || squash(detail) == "benign") return AttackLabel::kBenign;
    throw Error(Errc::kUnknownLabel, "benign row with detail '" + std::string(detail) + "'");
  }
  if (label == "malicious") {
    if (no_detail) return AttackLabel::kAttack;
    if (auto l = detail_label(detail); l && *l != AttackLabel::kBenign) return *l;
    throw Error(Errc::kUnknownLabel, "'" + std::string(detail) + "'");
  }
  // Some exports carry the detailed label in the label column directly.
  if (auto l = detail_label(raw_label)) return *l;
  throw Error(Errc::kUnknownLabel, "'" + std::string(raw_label) + "'");
}

std::string_view sensor_name(SensorType t) {
  switch (t) {
    case SensorType::kHumidity: return "humidity";
    case SensorType::kCo2: return "co2";
    case SensorType::kTemperature: return "temperature";
    case SensorType::kLuminosity: return "luminosity";
    case SensorType::kMotion: return "motion";
  }
  return "temperature";
}

std::optional<SensorType> parse_sensor_type(std::string_view s) {
  const std::string l = to_lower(trim(s));
  for (SensorType t : kAllSensorTypes) {
    if (l == sensor_name(t)) return t;
  }
  return std::nullopt;
}

std::string_view sensor_unit(SensorType t) {
  switch (t) {
    case SensorType::kHumidity: return "%";
    case SensorType::kCo2: return "ppm";
    case SensorType::kTemperature: return "C";
    case SensorType::kLuminosity: return "lux";
    case SensorType::kMotion: return "binary";
  }
  return "";
}

std::array<std::optional<std::string>, 21> conn_fields(const ConnRecord& r) {
  auto opt_int = [](const std::optional<std::int64_t>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return std::to_string(*v);
  };
  auto opt_bool = [](const std::optional<bool>& v) -> std::optional<std::string> {
    if (!v) return std::nullopt;
    return std::string(*v ? "T" : "F");
  };
  std::optional<std::string> duration;
  if (r.duration) duration = format_fixed(*r.duration, 6);
  return {format_epoch_seconds(r.ts),
          r.uid,
          r.orig_h,
          std::to_string(r.orig_p),
          r.resp_h,
          std::to_string(r.resp_p),
          r.proto,
          r.service,
          duration,
          opt_int(r.orig_bytes),
          opt_int(r.resp_bytes),
          r.conn_state,
          opt_bool(r.local_orig),
          opt_bool(r.local_resp),
          std::to_string(r.missed_bytes),
          r.history,
          std::to_string(r.orig_pkts),
          std::to_string(r.orig_ip_bytes),
          std::to_string(r.resp_pkts),
          std::to_string(r.resp_ip_bytes),
          r.tunnel_parents};
}

store::Row conn_row(const ConnRecord& r) {
  using store::Value;
  auto opt = [](const auto& v) -> Value {
    if (!v) return Value::null();
    return Value(*v);
  };
  return {Value::time(r.ts), Value(r.uid), Value(r.orig_h), Value(r.orig_p), Value(r.resp_h),
          Value(r.resp_p), Value(r.proto), opt(r.service), opt(r.duration), opt(r.orig_bytes),
          opt(r.resp_bytes), Value(r.conn_state), opt(r.local_orig), opt(r.local_resp),
          Value(r.missed_bytes), opt(r.history), Value(r.orig_pkts), Value(r.orig_ip_bytes),
          Value(r.resp_pkts), Value(r.resp_ip_bytes), opt(r.tunnel_parents)};
}

std::string conn_violation(const ConnRecord& r) {
  auto port_ok = [](std::int64_t p) { return p >= 0 && p <= 65535; };
  if (!port_ok(r.orig_p)) return "orig_p out of range";
  if (!port_ok(r.resp_p)) return "resp_p out of range";
  if (r.duration && *r.duration < 0) return "negative duration";
  if (r.orig_bytes && *r.orig_bytes < 0) return "negative orig_bytes";
  if (r.resp_bytes && *r.resp_bytes < 0) return "negative resp_bytes";
  if (r.missed_bytes < 0) return "negative missed_bytes";
  if (r.orig_pkts < 0 || r.orig_ip_bytes < 0 || r.resp_pkts < 0 || r.resp_ip_bytes < 0) {
    return "negative packet/byte count";
  }
  if (r.is_malicious != (r.label != AttackLabel::kBenign)) return "is_malicious disagrees with label";
  return {};
}

}  // namespace iotsql::ingest
