#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "iotsql/ingest/records.hpp"

namespace iotsql::splitter {

enum class Split { kTrain, kDev, kTest };
std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view s);

struct Ratios {
  double train = 0.6;
  double dev = 0.2;
  double test = 0.2;
};

// Throws BadRatios unless all ratios are in [0,1] and sum to 1 (+-1e-9).
void validate(const Ratios& r);

struct SplitManifest {
  std::string kind = "pairs";  // "pairs" or "network"
  std::uint64_t seed = 0;
  Ratios ratios;
  std::set<ingest::AttackLabel> train_attack_labels;
  std::vector<std::pair<std::string, Split>> assignment;  // input order
  std::vector<std::string> excluded;                      // network totals mode only

  std::size_t count(Split s) const;
  std::vector<std::string> ids(Split s) const;
  std::map<std::string, Split> by_id() const;
};

// Shuffles ids with the seed; dev and test get floor(n * ratio), train the rest.
SplitManifest split_pairs(const std::vector<std::string>& ids, const Ratios& ratios, std::uint64_t seed);

// "r0000000"-style id of the i-th network record.
std::string record_id(std::size_t index);

// Exact split sizes, as reported for the full IoT-23 conn.log.
struct NetworkTotals {
  std::size_t train = 0, dev = 0, test = 0;
  std::size_t train_malicious = 0, dev_malicious = 0, test_malicious = 0;
};
inline constexpr NetworkTotals kPublishedTotals{125000, 57199, 57199, 50000, 19701, 19697};

struct NetworkSplitConfig {
  std::set<ingest::AttackLabel> train_attacks = {ingest::AttackLabel::kPartOfAHorizontalPortScan,
                                                 ingest::AttackLabel::kOkiru};
  // Share of benign records within each split when allocating proportionally.
  double train_benign_share = 0.6;
  double eval_benign_share = 75000.0 / 114398.0;
  // When set, draw exactly these counts and list the rest as excluded.
  std::optional<NetworkTotals> totals;
};

// Attack-disjoint split. Malicious records with a train attack label go to
// train; other malicious records go to dev/test (dev takes the odd one).
// Benign records are allocated in proportion to the configured shares.
// Throws EmptyAttackClass, InsufficientBenign.
SplitManifest split_network(const std::vector<ingest::ConnRecord>& records, const NetworkSplitConfig& config,
                            std::uint64_t seed);

// is_malicious := label != Benign.
std::vector<ingest::ConnRecord> merge_labels(std::vector<ingest::ConnRecord> records);

// Header block ("# key: value") then "id<TAB>split" lines.
void write_manifest(std::ostream& out, const SplitManifest& m);
SplitManifest read_manifest(std::istream& in);

}  // namespace iotsql::splitter
