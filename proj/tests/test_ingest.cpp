#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/ingest/loader.hpp"
#include "iotsql/ingest/sensors.hpp"
#include "iotsql/ingest/synth.hpp"
#include "iotsql/ingest/zeek.hpp"

using namespace iotsql;
using namespace iotsql::ingest;

namespace {

const char* kIot23Conn =
    "#separator \\x09\n"
    "#set_separator\t,\n"
    "#empty_field\t(empty)\n"
    "#unset_field\t-\n"
    "#path\tconn\n"
    "#open\t2018-12-25-10-27-53\n"
    "#fields\tts\tuid\tid.orig_h\tid.orig_p\tid.resp_h\tid.resp_p\tproto\tservice\tduration\torig_bytes\tresp_bytes"
    "\tconn_state\tlocal_orig\tlocal_resp\tmissed_bytes\thistory\torig_pkts\torig_ip_bytes\tresp_pkts\tresp_ip_bytes"
    "\ttunnel_parents   label   detailed-label\n"
    "#types\ttime\tstring\taddr\tport\taddr\tport\tenum\tstring\tinterval\tcount\tcount\tstring\tbool\tbool\tcount"
    "\tstring\tcount\tcount\tcount\tcount\tset[string]   string   string\n"
    "1545730073.041217\tCrDn63WjJEmrWGjqf\t192.168.1.195\t41040\t185.244.25.235\t80\ttcp\t-\t3.139211\t0\t0\tS0\t-"
    "\t-\t0\tS\t3\t180\t0\t0\t-   Malicious   PartOfAHorizontalPortScan\n"
    "1545730074.5\tCY9lJW3gh1Eje4usP6\t192.168.1.195\t41040\t192.168.1.1\t53\tudp\tdns\t0.1\t38\t90\tSF\t-\t-\t0"
    "\tDd\t1\t66\t1\t118\t-   Benign   -\n"
    "#close\t2018-12-25-11-27-53\n";

}  // namespace

TEST_CASE("IoT-23 conn.log with whitespace-separated label columns") {
  const auto log = parse_zeek(std::string_view(kIot23Conn), LogKind::kConn);
  CHECK(log.errors.empty());
  REQUIRE(log.conn.size() == 2);
  const auto& r = log.conn[0];
  CHECK(r.ts == 1545730073041217);
  CHECK(r.orig_h == "192.168.1.195");
  CHECK(r.resp_p == 80);
  CHECK_FALSE(r.service.has_value());
  CHECK(r.duration == doctest::Approx(3.139211));
  CHECK(r.label == AttackLabel::kPartOfAHorizontalPortScan);
  CHECK(log.conn[1].label == AttackLabel::kBenign);
  CHECK(log.conn[1].service == "dns");
  CHECK(log.field_index("orig_h").has_value());
}

TEST_CASE("label taxonomy") {
  CHECK(parse_iot23_label("Benign", "-") == AttackLabel::kBenign);
  CHECK(parse_iot23_label("malicious", "C&C") == AttackLabel::kCandC);
  CHECK(parse_iot23_label("Malicious", "Okiru") == AttackLabel::kOkiru);
  CHECK(parse_iot23_label("Malicious", "DDoS") == AttackLabel::kDDoS);
  CHECK(parse_iot23_label("Malicious", "-") == AttackLabel::kAttack);
  CHECK_THROWS_AS(parse_iot23_label("Malicious", "Nonsense"), Error);
  for (auto l : kAllLabels) {
    CHECK(parse_iot23_label(l == AttackLabel::kBenign ? "Benign" : "Malicious",
                            l == AttackLabel::kBenign ? "-" : label_iot23_name(l)) == l);
  }
}

TEST_CASE("malformed lines are collected, missing header throws") {
  std::string text = kIot23Conn;
  text.insert(text.find("#close"), "1545730075.0\tshort\trow\n");
  const auto log = parse_zeek(std::string_view(text), LogKind::kConn);
  CHECK(log.conn.size() == 2);
  REQUIRE(log.errors.size() == 1);
  CHECK(log.errors[0].code == Errc::kFieldCountMismatch);
  try {
    parse_zeek(std::string_view("1\t2\t3\n"), LogKind::kConn);
    FAIL("expected MissingFieldsHeader");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kMissingFieldsHeader);
  }
  CHECK_THROWS_AS(parse_log_kind("smtp"), Error);
  CHECK(parse_log_kind("CONN.log") == LogKind::kConn);
}

TEST_CASE("JSON-lines conn log") {
  const std::string js =
      R"({"ts":1545730073.5,"uid":"C1","id.orig_h":"10.0.0.1","id.orig_p":1,"id.resp_h":"10.0.0.2","id.resp_p":2,)"
      R"("proto":"tcp","conn_state":"S0","missed_bytes":0,"history":"S","orig_pkts":1,"orig_ip_bytes":40,)"
      R"("resp_pkts":0,"resp_ip_bytes":0,"label":"Malicious","detailed-label":"Okiru"})"
      "\n";
  const auto log = parse_zeek(std::string_view(js), LogKind::kConn);
  REQUIRE(log.conn.size() == 1);
  CHECK(log.conn[0].label == AttackLabel::kOkiru);
  CHECK(log.conn[0].ts == 1545730073500000);
}

TEST_CASE("property: writer and parser round-trip synthetic conn records") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto spec = SynthSpec::defaults();
    spec.conn = 300;
    spec.dns = spec.http = spec.files = spec.ntp = spec.weird = 20;
    spec.readings_per_sensor = 10;
    spec.seed = seed;
    const auto out = synthesize_logs(spec);
    std::ostringstream os;
    write_conn_log(os, out.conn, spec.start);
    auto back = parse_zeek(std::string_view(os.str()), LogKind::kConn);
    CHECK(back.errors.empty());
    REQUIRE(back.conn.size() == out.conn.size());
    for (std::size_t i = 0; i < out.conn.size(); ++i) {
      auto a = out.conn[i], b = back.conn[i];
      a.is_malicious = b.is_malicious = false;
      CHECK(a == b);
      CHECK(conn_violation(out.conn[i]).empty());
    }
  }
}

TEST_CASE("synthesis is deterministic and honours the label mix") {
  auto spec = SynthSpec::defaults();
  spec.conn = 1000;
  const auto a = synthesize_logs(spec), b = synthesize_logs(spec);
  CHECK(a.conn == b.conn);
  const auto counts = label_counts(spec.label_mix, spec.conn);
  std::size_t total = 0;
  for (const auto& [l, n] : counts) {
    total += n;
    CHECK(std::abs(static_cast<double>(n) - spec.label_mix.at(l) * 1000.0) <= 1.0);
  }
  CHECK(total == 1000);
  std::map<AttackLabel, std::size_t> seen;
  for (const auto& r : a.conn) ++seen[r.label];
  for (const auto& [l, n] : counts) CHECK(seen[l] == n);
  std::set<std::string> uids;
  for (const auto& r : a.conn) uids.insert(r.uid);
  const auto& dns = a.logs.at(LogKind::kDns);
  const auto uid_col = *dns.field_index("uid");
  for (const auto& row : dns.rows) CHECK(uids.count(*row[uid_col]) == 1);
}

TEST_CASE("synth spec validation") {
  auto spec = SynthSpec::defaults();
  spec.label_mix[AttackLabel::kBenign] += 0.1;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = SynthSpec::defaults();
  spec.rooms = 0;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = SynthSpec::defaults();
  CHECK_NOTHROW(validate(spec));
}

TEST_CASE("sensor csv") {
  const auto r = ingest_sensors(std::string_view("room,ts,value\n312,2023-03-01T00:00:00,21.5\n"
                                                 "# comment\n101,1677628800,22\n"),
                                SensorType::kTemperature);
  REQUIRE(r.size() == 2);
  CHECK(r[0].room == "312");
  CHECK(r[1].ts == r[0].ts);
  CHECK(room_floor("312") == 3);
  CHECK(room_floor("R512") == 5);
  auto code = [](std::string_view text, SensorType t) {
    try {
      ingest_sensors(text, t);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kIo;
  };
  CHECK(code("room,ts,value\n101,yesterday,1\n", SensorType::kCo2) == Errc::kBadTimestamp);
  CHECK(code("room,ts,value\n101,1677628800,2\n", SensorType::kMotion) == Errc::kBadValue);
  CHECK(code("room,ts,value\n101,1677628800\n", SensorType::kCo2) == Errc::kBadValue);
  const auto row = sensor_row(r[0], 0);
  CHECK(row.size() == 7);
  CHECK(row[1] == store::Value("temperature-312"));
}

TEST_CASE("field values") {
  using store::Attribute;
  CHECK(field_value(std::nullopt, Attribute::kNumber).is_null());
  CHECK(field_value(std::string("60.000000,61"), Attribute::kNumber) == store::Value(60));
  CHECK(field_value(std::string("T"), Attribute::kBoolean) == store::Value(true));
  CHECK(field_value(std::string("1545730073.5"), Attribute::kTime).as_time() == 1545730073500000);
  CHECK_THROWS_AS(field_value(std::string("abc"), Attribute::kNumber), Error);
}

TEST_CASE("synthetic directory loads every table") {
  auto spec = SynthSpec::defaults();
  spec.conn = 200;
  spec.readings_per_sensor = 20;
  const auto out = synthesize_logs(spec);
  const auto dir = fixtures::temp_dir("synthdir");
  write_synth(dir, out, spec.start);
  IngestReport rep;
  const auto db = load_directory(dir, &rep);
  CHECK(rep.problems.empty());
  CHECK(db.row_count("conn.log") == 200);
  CHECK(db.row_count("dns.log") == spec.dns);
  CHECK(db.row_count("motion") == 20);
  CHECK(db.row_count("devices") == out.devices.size());
  const auto direct = database_from_synth(out);
  CHECK(direct.rows(0) == db.rows(0));
}
