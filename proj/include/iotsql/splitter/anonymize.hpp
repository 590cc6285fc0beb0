#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "iotsql/ingest/records.hpp"

namespace iotsql::splitter {

struct Anonymized {
  std::vector<ingest::ConnRecord> records;
  std::map<std::string, std::string> ip_map;  // original -> replacement
  std::vector<std::int64_t> time_offsets;     // seconds, per record
};

// Replaces every address through one random bijection into 100.64.0.0/10
// (never reusing an input address) and shifts each ts by an independent
// offset of at most 30 days. Other fields are untouched.
Anonymized anonymize(const std::vector<ingest::ConnRecord>& records, std::uint64_t seed);

inline constexpr std::int64_t kMaxOffsetSeconds = 30LL * 24 * 3600;

// JSON: {"ip_map": {...}, "time_offsets": {"r0000000": s, ...}}. Kept apart
// from released data.
void write_maps(std::ostream& out, const Anonymized& a);

}  // namespace iotsql::splitter
