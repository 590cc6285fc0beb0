#include "iotsql/splitter/anonymize.hpp"

#include <set>

#include "iotsql/common/rng.hpp"
#include "iotsql/splitter/split.hpp"
#include "json.hpp"

namespace iotsql::splitter {

namespace {

// 100.64.0.0/10: 2^22 addresses.
std::string pool_address(std::uint32_t offset) {
  const std::uint32_t ip = (100u << 24) | (64u << 16) | offset;
  return std::to_string(ip >> 24) + "." + std::to_string((ip >> 16) & 0xff) + "." + std::to_string((ip >> 8) & 0xff) +
         "." + std::to_string(ip & 0xff);
}

}  // namespace

Anonymized anonymize(const std::vector<ingest::ConnRecord>& records, std::uint64_t seed) {
  Anonymized out;
  std::set<std::string> inputs;
  for (const auto& r : records) {
    inputs.insert(r.orig_h);
    inputs.insert(r.resp_h);
  }
  Rng ip_rng(derive_seed(seed, {0xa11}));
  std::set<std::string> used;
  for (const auto& ip : inputs) {
    std::string repl;
    do {
      repl = pool_address(static_cast<std::uint32_t>(ip_rng.below(1u << 22)));
    } while (inputs.count(repl) || used.count(repl));
    used.insert(repl);
    out.ip_map.emplace(ip, repl);
  }
  out.records.reserve(records.size());
  out.time_offsets.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    Rng rng(derive_seed(seed, {0x7135, i}));
    const std::int64_t offset = rng.between(-kMaxOffsetSeconds, kMaxOffsetSeconds);
    ingest::ConnRecord r = records[i];
    r.orig_h = out.ip_map.at(r.orig_h);
    r.resp_h = out.ip_map.at(r.resp_h);
    r.ts += offset * 1000000;
    out.time_offsets.push_back(offset);
    out.records.push_back(std::move(r));
  }
  return out;
}

void write_maps(std::ostream& out, const Anonymized& a) {
  nlohmann::ordered_json j;
  j["ip_map"] = nlohmann::ordered_json::object();
  for (const auto& [from, to] : a.ip_map) j["ip_map"][from] = to;
  j["time_offsets"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < a.time_offsets.size(); ++i) j["time_offsets"][record_id(i)] = a.time_offsets[i];
  out << j.dump(2) << '\n';
}

}  // namespace iotsql::splitter
