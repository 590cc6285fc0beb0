#include "iotsql/ingest/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "iotsql/common/error.hpp"
#include "iotsql/common/rng.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/ingest/sensors.hpp"

namespace iotsql::ingest {

SynthSpec SynthSpec::defaults() {
  SynthSpec s;
  s.label_mix = {
      {AttackLabel::kBenign, 0.40},      {AttackLabel::kPartOfAHorizontalPortScan, 0.22},
      {AttackLabel::kOkiru, 0.16},       {AttackLabel::kDDoS, 0.05},
      {AttackLabel::kCandC, 0.05},       {AttackLabel::kHeartBeat, 0.03},
      {AttackLabel::kAttack, 0.03},      {AttackLabel::kMirai, 0.02},
      {AttackLabel::kTorii, 0.02},       {AttackLabel::kFileDownload, 0.02},
  };
  s.start = *parse_iso_time("2023-03-01 00:00:00");
  s.window = 7LL * 24 * 3600 * 1000000;
  return s;
}

void validate(const SynthSpec& spec) {
  if (spec.label_mix.empty() && spec.conn > 0) throw Error(Errc::kInvalidSpec, "empty label mix");
  double sum = 0.0;
  for (const auto& [label, f] : spec.label_mix) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw Error(Errc::kInvalidSpec, "fraction for " + std::string(label_name(label)) + " is negative");
    }
    sum += f;
  }
  if (!spec.label_mix.empty() && std::fabs(sum - 1.0) > 1e-9) {
    throw Error(Errc::kInvalidSpec, "label fractions sum to " + format_double(sum));
  }
  if (spec.window <= 0) throw Error(Errc::kInvalidSpec, "time window must be positive");
  if (spec.address_pool == 0 || spec.address_pool > 60000) {
    throw Error(Errc::kInvalidSpec, "address pool must be in 1..60000");
  }
  if (spec.rooms == 0) throw Error(Errc::kInvalidSpec, "need at least one room");
  const std::size_t aux = spec.dns + spec.http + spec.files + spec.ntp + spec.weird;
  if (aux > 0 && spec.conn == 0) throw Error(Errc::kInvalidSpec, "auxiliary logs need conn records");
}

std::map<AttackLabel, std::size_t> label_counts(const std::map<AttackLabel, double>& mix, std::size_t n) {
  std::map<AttackLabel, std::size_t> out;
  std::vector<std::pair<double, AttackLabel>> rema;
  std::size_t used = 0;
  for (const auto& [label, f] : mix) {
    const double exact = f * static_cast<double>(n);
    const auto base = static_cast<std::size_t>(std::floor(exact + 1e-9));
    out[label] = base;
    used += base;
    rema.push_back({exact - static_cast<double>(base), label});
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < n && i < rema.size(); ++i, ++used) out[rema[i].second] += 1;
  return out;
}

namespace {

constexpr std::string_view kAlnum = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::string make_id(Rng& rng, char prefix, std::size_t len) {
  std::string s(1, prefix);
  for (std::size_t i = 0; i < len; ++i) s += kAlnum[rng.below(kAlnum.size())];
  return s;
}

std::string internal_ip(std::size_t i) {
  return "192.168." + std::to_string(1 + i / 250) + "." + std::to_string(2 + i % 250);
}

std::string external_ip(Rng& rng) {
  static constexpr std::array<int, 12> kFirst = {23, 31, 45, 62, 81, 89, 104, 141, 151, 185, 203, 212};
  return std::to_string(kFirst[rng.below(kFirst.size())]) + "." + std::to_string(rng.between(0, 255)) + "." +
         std::to_string(rng.between(0, 255)) + "." + std::to_string(rng.between(1, 254));
}

double micros_round(double seconds) { return std::round(seconds * 1e6) / 1e6; }

// Log-uniform integer in [lo, hi].
std::int64_t log_between(Rng& rng, double lo, double hi) {
  return static_cast<std::int64_t>(std::floor(std::exp(std::log(lo) + rng.unit() * (std::log(hi) - std::log(lo)))));
}

template <typename T>
const T& choose(Rng& rng, std::initializer_list<T> items) {
  return *(items.begin() + rng.below(items.size()));
}

void fill_traffic(ConnRecord& r, Rng& rng, const std::vector<std::string>& scan_targets) {
  auto tcp_counts = [&](std::int64_t opk, std::int64_t rpk, std::int64_t obytes, std::int64_t rbytes) {
    r.orig_pkts = opk;
    r.resp_pkts = rpk;
    r.orig_bytes = obytes;
    r.resp_bytes = rbytes;
    r.orig_ip_bytes = obytes + 40 * opk;
    r.resp_ip_bytes = rbytes + 40 * rpk;
  };
  auto syn_only = [&]() {
    r.proto = "tcp";
    r.conn_state = "S0";
    r.history = "S";
    r.duration.reset();
    r.orig_bytes = 0;
    r.resp_bytes = 0;
    r.orig_pkts = rng.between(1, 3);
    r.orig_ip_bytes = 40 * r.orig_pkts + (r.orig_pkts > 1 ? 20 : 0);
    r.resp_pkts = 0;
    r.resp_ip_bytes = 0;
    if (r.orig_pkts > 1) r.duration = micros_round(1.0 + 2.0 * rng.unit());
  };
  switch (r.label) {
    case AttackLabel::kBenign: {
      const int kind = static_cast<int>(rng.below(5));
      if (kind == 0) {
        r.proto = "udp";
        r.service = "dns";
        r.resp_p = 53;
        r.conn_state = "SF";
        r.history = "Dd";
        r.duration = micros_round(0.001 + 0.2 * rng.unit());
        r.orig_pkts = 1;
        r.resp_pkts = 1;
        r.orig_bytes = rng.between(30, 80);
        r.resp_bytes = rng.between(60, 400);
        r.orig_ip_bytes = *r.orig_bytes + 28;
        r.resp_ip_bytes = *r.resp_bytes + 28;
      } else if (kind == 1) {
        r.proto = "udp";
        r.service = "ntp";
        r.resp_p = 123;
        r.conn_state = "SF";
        r.history = "Dd";
        r.duration = micros_round(0.01 + 0.1 * rng.unit());
        r.orig_pkts = 1;
        r.resp_pkts = 1;
        r.orig_bytes = 48;
        r.resp_bytes = 48;
        r.orig_ip_bytes = 76;
        r.resp_ip_bytes = 76;
      } else {
        r.proto = "tcp";
        r.resp_p = choose(rng, {80, 443, 8080, 8883});
        if (r.resp_p == 80 || r.resp_p == 8080) r.service = "http";
        if (r.resp_p == 443) r.service = "ssl";
        r.conn_state = choose<std::string>(rng, {"SF", "SF", "SF", "S1", "RSTO"});
        r.history = choose<std::string>(rng, {"ShADadfF", "ShADadFf", "ShADadR", "ShAdDaFf"});
        r.duration = micros_round(0.05 + 30.0 * rng.unit() * rng.unit());
        const auto opk = rng.between(4, 40);
        const auto rpk = rng.between(3, 60);
        tcp_counts(opk, rpk, log_between(rng, 100, 20000), log_between(rng, 200, 400000));
      }
      r.local_orig = true;
      r.local_resp = false;
      break;
    }
    case AttackLabel::kPartOfAHorizontalPortScan:
      syn_only();
      r.resp_h = scan_targets[rng.below(scan_targets.size())];
      r.resp_p = choose(rng, {23, 2323, 8081, 5555});
      break;
    case AttackLabel::kOkiru:
      syn_only();
      r.resp_p = choose(rng, {37215, 52869});
      break;
    case AttackLabel::kMirai:
      syn_only();
      r.resp_p = choose(rng, {23, 2323});
      r.conn_state = choose<std::string>(rng, {"S0", "REJ"});
      if (r.conn_state == "REJ") {
        r.history = "Sr";
        r.resp_pkts = 1;
        r.resp_ip_bytes = 40;
      }
      break;
    case AttackLabel::kDDoS: {
      r.proto = choose<std::string>(rng, {"tcp", "udp"});
      r.resp_p = choose(rng, {80, 53, 443});
      r.conn_state = r.proto == "tcp" ? "S0" : "OTH";
      r.history = r.proto == "tcp" ? "S" : "D";
      r.duration = micros_round(1.0 + 60.0 * rng.unit());
      const auto opk = rng.between(200, 5000);
      r.orig_pkts = opk;
      r.orig_bytes = opk * rng.between(0, 512);
      r.orig_ip_bytes = *r.orig_bytes + 28 * opk;
      r.resp_pkts = 0;
      r.resp_bytes = 0;
      r.resp_ip_bytes = 0;
      break;
    }
    case AttackLabel::kCandC:
      r.proto = "tcp";
      r.resp_p = choose(rng, {6667, 1337, 31337, 4321});
      r.conn_state = choose<std::string>(rng, {"SF", "S3", "RSTR"});
      r.history = choose<std::string>(rng, {"ShAdDaf", "ShADadr", "ShAdDa"});
      r.duration = micros_round(30.0 + 600.0 * rng.unit());
      tcp_counts(rng.between(5, 20), rng.between(5, 20), rng.between(50, 600), rng.between(20, 300));
      break;
    case AttackLabel::kHeartBeat:
      r.proto = choose<std::string>(rng, {"tcp", "udp"});
      r.resp_p = choose(rng, {1900, 6668, 9876});
      r.conn_state = r.proto == "tcp" ? "SF" : "SHR";
      r.history = r.proto == "tcp" ? "ShADFf" : "^d";
      r.duration = micros_round(0.5 + rng.unit());
      tcp_counts(2, 2, 32, 32);
      break;
    case AttackLabel::kFileDownload:
      r.proto = "tcp";
      r.service = "http";
      r.resp_p = choose(rng, {80, 8080});
      r.conn_state = "SF";
      r.history = "ShADadfF";
      r.duration = micros_round(2.0 + 20.0 * rng.unit());
      tcp_counts(rng.between(20, 80), rng.between(100, 900), rng.between(200, 600),
                 rng.between(100000, 2000000));
      break;
    case AttackLabel::kTorii:
      r.proto = "tcp";
      r.service = "ssl";
      r.resp_p = 443;
      r.conn_state = choose<std::string>(rng, {"SF", "S1"});
      r.history = "ShADadf";
      r.duration = micros_round(100.0 + 900.0 * rng.unit());
      tcp_counts(rng.between(8, 30), rng.between(8, 30), rng.between(1000, 3000), rng.between(1000, 3000));
      break;
    case AttackLabel::kAttack:
      r.proto = "tcp";
      r.resp_p = choose(rng, {22, 23});
      r.conn_state = choose<std::string>(rng, {"RSTO", "RSTOS0", "SF"});
      r.history = choose<std::string>(rng, {"ShAdDaR", "ShR", "ShADadFf"});
      r.duration = micros_round(0.5 + 5.0 * rng.unit());
      tcp_counts(rng.between(4, 15), rng.between(3, 12), rng.between(40, 400), rng.between(20, 900));
      break;
  }
  if (r.label != AttackLabel::kBenign) {
    r.local_orig.reset();
    r.local_resp.reset();
  }
}

std::vector<Field> zeek_id_fields(const ConnRecord& c) {
  return {format_epoch_seconds(c.ts), c.uid, c.orig_h, std::to_string(c.orig_p), c.resp_h,
          std::to_string(c.resp_p)};
}

// Picks n conn records, preferring those whose service matches.
std::vector<const ConnRecord*> pick_conns(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n,
                                          std::string_view service) {
  std::vector<const ConnRecord*> pool;
  for (const auto& c : conn) {
    if (service.empty() || (c.service && *c.service == service)) pool.push_back(&c);
  }
  if (pool.empty()) {
    for (const auto& c : conn) pool.push_back(&c);
  }
  std::vector<const ConnRecord*> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[rng.below(pool.size())]);
  std::stable_sort(out.begin(), out.end(), [](auto a, auto b) { return a->ts < b->ts; });
  return out;
}

constexpr std::array<std::string_view, 14> kDomains = {
    "time.google.com",     "pool.ntp.org",         "api.smartthings.com", "mqtt.iot-hub.net",
    "updates.tplink.com",  "cloud.philips-hue.com", "www.example.org",     "cdn.firmware-upd.net",
    "connect.xiaomi.com",  "alexa.amazon.com",     "ocsp.digicert.com",   "weather.api.io",
    "nest.googleapis.com", "broker.hivemq.com"};

ParsedLog synth_dns(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n) {
  std::vector<std::vector<Field>> rows;
  for (const ConnRecord* c : pick_conns(rng, conn, n, "dns")) {
    auto row = zeek_id_fields(*c);
    const int qtype = choose(rng, {1, 28, 16, 12});
    const char* qtype_name = qtype == 1 ? "A" : qtype == 28 ? "AAAA" : qtype == 16 ? "TXT" : "PTR";
    const bool nx = rng.bernoulli(0.1);
    const std::int64_t ttl = rng.between(30, 3600);
    row.push_back(c->proto);
    row.push_back(std::to_string(rng.between(0, 65535)));
    row.push_back(format_fixed(micros_round(0.001 + 0.1 * rng.unit()), 6));
    row.push_back(std::string(kDomains[rng.below(kDomains.size())]));
    row.push_back("1");
    row.push_back("C_INTERNET");
    row.push_back(std::to_string(qtype));
    row.push_back(qtype_name);
    row.push_back(nx ? "3" : "0");
    row.push_back(nx ? "NXDOMAIN" : "NOERROR");
    row.push_back("F");
    row.push_back("F");
    row.push_back("T");
    row.push_back(rng.bernoulli(0.9) ? "T" : "F");
    row.push_back("0");
    if (nx) {
      row.push_back(Field{});
      row.push_back(Field{});
    } else {
      row.push_back(external_ip(rng));
      row.push_back(std::to_string(ttl) + ".000000");
    }
    row.push_back("F");
    rows.push_back(std::move(row));
  }
  return make_log(LogKind::kDns, std::move(rows));
}

ParsedLog synth_http(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n) {
  static constexpr std::array<std::string_view, 8> kUris = {
      "/",          "/index.html", "/api/v1/status", "/firmware/latest.bin",
      "/bins/mips", "/shell",      "/cgi-bin/luci",  "/images/logo.png"};
  std::vector<std::vector<Field>> rows;
  for (const ConnRecord* c : pick_conns(rng, conn, n, "http")) {
    auto row = zeek_id_fields(*c);
    const bool post = rng.bernoulli(0.2);
    const int status = choose(rng, {200, 200, 200, 301, 404, 500});
    const std::string uri(kUris[rng.below(kUris.size())]);
    row.push_back(std::to_string(rng.between(1, 3)));
    row.push_back(post ? "POST" : "GET");
    row.push_back(c->resp_h);
    row.push_back(uri);
    row.push_back(Field{});
    row.push_back("1.1");
    row.push_back(choose<std::string>(rng, {"Wget", "curl/7.64.0", "Mozilla/5.0", "Hue/1.0"}));
    row.push_back(Field{});
    row.push_back(std::to_string(post ? rng.between(10, 2000) : 0));
    row.push_back(std::to_string(c->resp_bytes.value_or(0)));
    row.push_back(std::to_string(status));
    row.push_back(status == 200 ? "OK" : status == 301 ? "Moved Permanently" : status == 404 ? "Not Found"
                                                                                         : "Internal Server Error");
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(std::string());
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(make_id(rng, 'F', 17));
    row.push_back(Field{});
    row.push_back(choose<std::string>(rng, {"text/html", "application/octet-stream", "image/png",
                                            "application/json"}));
    rows.push_back(std::move(row));
  }
  return make_log(LogKind::kHttp, std::move(rows));
}

ParsedLog synth_files(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n) {
  std::vector<std::vector<Field>> rows;
  for (const ConnRecord* c : pick_conns(rng, conn, n, "http")) {
    const std::int64_t total = c->resp_bytes.value_or(0) > 0 ? *c->resp_bytes : rng.between(100, 50000);
    const bool truncated = rng.bernoulli(0.1);
    const std::int64_t seen = truncated ? total / 2 : total;
    std::vector<Field> row{format_epoch_seconds(c->ts), make_id(rng, 'F', 17), c->resp_h, c->orig_h, c->uid};
    row.push_back("HTTP");
    row.push_back("0");
    row.push_back(std::string());
    row.push_back(choose<std::string>(rng, {"text/html", "application/x-executable", "image/png",
                                            "application/json"}));
    row.push_back(rng.bernoulli(0.3) ? Field{"update.bin"} : Field{});
    row.push_back(format_fixed(micros_round(0.01 + rng.unit()), 6));
    row.push_back(Field{});
    row.push_back("F");
    row.push_back(std::to_string(seen));
    row.push_back(std::to_string(total));
    row.push_back(std::to_string(total - seen));
    row.push_back("0");
    row.push_back(truncated ? "T" : "F");
    row.push_back(Field{});
    row.push_back(make_id(rng, 'm', 31));
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    row.push_back(Field{});
    rows.push_back(std::move(row));
  }
  return make_log(LogKind::kFiles, std::move(rows));
}

ParsedLog synth_ntp(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n) {
  std::vector<std::vector<Field>> rows;
  for (const ConnRecord* c : pick_conns(rng, conn, n, "ntp")) {
    auto row = zeek_id_fields(*c);
    const Micros ref = c->ts - rng.between(1, 600) * 1000000;
    row.push_back("4");
    row.push_back(choose<std::string>(rng, {"3", "4"}));
    row.push_back(std::to_string(rng.between(1, 4)));
    row.push_back(std::to_string(choose(rng, {16, 64, 1024})));
    row.push_back(format_fixed(std::ldexp(1.0, -static_cast<int>(rng.between(18, 24))), 6));
    row.push_back(format_fixed(micros_round(0.05 * rng.unit()), 6));
    row.push_back(format_fixed(micros_round(0.05 * rng.unit()), 6));
    row.push_back(choose<std::string>(rng, {"GPS", "PPS", "10.0.0.1", "216.239.35.0"}));
    row.push_back(format_epoch_seconds(ref));
    row.push_back(format_epoch_seconds(c->ts - 2000));
    row.push_back(format_epoch_seconds(c->ts - 1000));
    row.push_back(format_epoch_seconds(c->ts));
    row.push_back("0");
    rows.push_back(std::move(row));
  }
  return make_log(LogKind::kNtp, std::move(rows));
}

ParsedLog synth_weird(Rng& rng, const std::vector<ConnRecord>& conn, std::size_t n) {
  std::vector<std::vector<Field>> rows;
  for (const ConnRecord* c : pick_conns(rng, conn, n, "")) {
    auto row = zeek_id_fields(*c);
    row.push_back(choose<std::string>(rng, {"bad_TCP_checksum", "data_before_established", "dns_unmatched_msg",
                                            "truncated_header", "possible_split_routing", "active_connection_reuse"}));
    row.push_back(Field{});
    row.push_back("F");
    row.push_back("zeek");
    row.push_back(choose<std::string>(rng, {"TCP", "DNS", "HTTP"}));
    rows.push_back(std::move(row));
  }
  return make_log(LogKind::kWeird, std::move(rows));
}

double sensor_value(Rng& rng, SensorType t) {
  switch (t) {
    case SensorType::kHumidity: return std::round((30.0 + 35.0 * rng.unit()) * 10.0) / 10.0;
    case SensorType::kCo2: return static_cast<double>(rng.between(400, 1600));
    case SensorType::kTemperature: return std::round((18.0 + 10.0 * rng.unit()) * 10.0) / 10.0;
    case SensorType::kLuminosity: return static_cast<double>(rng.between(0, 1200));
    case SensorType::kMotion: return rng.bernoulli(0.3) ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

SynthOutput synthesize_logs(const SynthSpec& spec) {
  validate(spec);
  SynthOutput out;

  std::vector<std::string> rooms;
  for (std::size_t i = 0; i < spec.rooms; ++i) {
    rooms.push_back(std::to_string(100 * (1 + i / 12) + 1 + i % 12));
  }

  Rng dev_rng(derive_seed(spec.seed, {1}));
  for (std::size_t i = 0; i < spec.address_pool; ++i) {
    DeviceRow d;
    d.ip = internal_ip(i);
    char mac[18];
    std::snprintf(mac, sizeof mac, "b8:27:eb:%02x:%02x:%02x", static_cast<unsigned>(i >> 8) & 0xff,
                  static_cast<unsigned>(i) & 0xff, static_cast<unsigned>(dev_rng.below(256)));
    d.mac = mac;
    d.room = rooms[dev_rng.below(rooms.size())];
    d.floor = room_floor(d.room).value_or(0);
    d.device_type = choose<std::string>(dev_rng, {"camera", "thermostat", "smart_plug", "hub", "bulb",
                                                  "speaker", "sensor_gateway"});
    d.vendor = choose<std::string>(dev_rng, {"Philips", "Xiaomi", "TP-Link", "Amazon", "Somfy", "Hikvision"});
    d.firmware = std::to_string(dev_rng.between(1, 4)) + "." + std::to_string(dev_rng.between(0, 9)) + "." +
                 std::to_string(dev_rng.between(0, 20));
    d.first_seen = spec.start - dev_rng.between(1, 400) * 86400LL * 1000000;
    out.devices.push_back(std::move(d));
  }

  // conn records: labels laid out by exact counts, then shuffled.
  std::vector<AttackLabel> labels;
  for (const auto& [label, count] : label_counts(spec.label_mix, spec.conn)) {
    labels.insert(labels.end(), count, label);
  }
  Rng conn_rng(derive_seed(spec.seed, {2}));
  conn_rng.shuffle(labels);
  std::vector<std::string> scan_targets;
  for (int i = 0; i < 40; ++i) scan_targets.push_back(external_ip(conn_rng));
  std::vector<std::string> attackers;
  for (int i = 0; i < 12; ++i) attackers.push_back(external_ip(conn_rng));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Rng rng(derive_seed(spec.seed, {2, i}));
    ConnRecord r;
    r.label = labels[i];
    r.is_malicious = r.label != AttackLabel::kBenign;
    r.ts = spec.start + static_cast<Micros>(rng.below(static_cast<std::uint64_t>(spec.window)));
    r.uid = make_id(rng, 'C', 17);
    r.orig_h = internal_ip(rng.below(spec.address_pool));
    r.orig_p = rng.between(1024, 65535);
    r.resp_h = external_ip(rng);
    if (r.label == AttackLabel::kCandC || r.label == AttackLabel::kHeartBeat) {
      r.resp_h = attackers[rng.below(attackers.size())];
    }
    fill_traffic(r, rng, scan_targets);
    r.missed_bytes = r.label == AttackLabel::kBenign && rng.bernoulli(0.02) ? rng.between(1, 1460) : 0;
    out.conn.push_back(std::move(r));
  }
  std::stable_sort(out.conn.begin(), out.conn.end(), [](const auto& a, const auto& b) { return a.ts < b.ts; });

  Rng aux(derive_seed(spec.seed, {3}));
  out.logs[LogKind::kDns] = synth_dns(aux, out.conn, spec.dns);
  out.logs[LogKind::kHttp] = synth_http(aux, out.conn, spec.http);
  out.logs[LogKind::kFiles] = synth_files(aux, out.conn, spec.files);
  out.logs[LogKind::kNtp] = synth_ntp(aux, out.conn, spec.ntp);
  out.logs[LogKind::kWeird] = synth_weird(aux, out.conn, spec.weird);

  for (SensorType t : kAllSensorTypes) {
    Rng rng(derive_seed(spec.seed, {4, static_cast<std::uint64_t>(t)}));
    std::vector<SensorReading> readings;
    for (std::size_t i = 0; i < spec.readings_per_sensor; ++i) {
      SensorReading r;
      r.sensor_type = t;
      r.room = rooms[rng.below(rooms.size())];
      // Whole seconds, as the sensor CSV carries ISO timestamps.
      r.ts = spec.start + static_cast<Micros>(rng.below(static_cast<std::uint64_t>(spec.window / 1000000))) * 1000000;
      r.value = sensor_value(rng, t);
      readings.push_back(std::move(r));
    }
    std::stable_sort(readings.begin(), readings.end(), [](const auto& a, const auto& b) { return a.ts < b.ts; });
    out.sensors[t] = std::move(readings);
  }
  return out;
}

void write_synth(const std::filesystem::path& dir, const SynthOutput& out, Micros open_time) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "logs");
  fs::create_directories(dir / "sensors");
  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::kIo, "cannot write " + p.string());
    return f;
  };
  {
    auto f = open(dir / "logs" / "conn.log");
    write_conn_log(f, out.conn, open_time);
  }
  for (const auto& [kind, log] : out.logs) {
    auto f = open(dir / "logs" / (std::string(log_kind_name(kind)) + ".log"));
    write_zeek_tsv(f, log, open_time);
  }
  for (const auto& [type, readings] : out.sensors) {
    auto f = open(dir / "sensors" / (std::string(sensor_name(type)) + ".csv"));
    write_sensors(f, readings);
  }
  auto f = open(dir / "devices.csv");
  f << "ip,mac,room,floor,device_type,vendor,firmware,first_seen\n";
  for (const auto& d : out.devices) {
    f << d.ip << ',' << d.mac << ',' << d.room << ',' << d.floor << ',' << d.device_type << ',' << d.vendor << ','
      << d.firmware << ',' << format_iso_time(d.first_seen) << '\n';
  }
}

}  // namespace iotsql::ingest
