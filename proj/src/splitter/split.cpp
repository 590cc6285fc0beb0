#include "iotsql/splitter/split.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "iotsql/common/error.hpp"
#include "iotsql/common/rng.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::splitter {

using ingest::AttackLabel;

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view s) {
  const std::string l = to_lower(trim(s));
  if (l == "train") return Split::kTrain;
  if (l == "dev" || l == "validation" || l == "val") return Split::kDev;
  if (l == "test") return Split::kTest;
  return std::nullopt;
}

void validate(const Ratios& r) {
  for (double x : {r.train, r.dev, r.test}) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::kBadRatios, "ratio " + format_double(x) + " outside [0,1]");
  }
  const double sum = r.train + r.dev + r.test;
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(Errc::kBadRatios, "ratios sum to " + format_double(sum));
}

std::size_t SplitManifest::count(Split s) const {
  return static_cast<std::size_t>(
      std::count_if(assignment.begin(), assignment.end(), [s](const auto& a) { return a.second == s; }));
}

std::vector<std::string> SplitManifest::ids(Split s) const {
  std::vector<std::string> out;
  for (const auto& [id, split] : assignment) {
    if (split == s) out.push_back(id);
  }
  return out;
}

std::map<std::string, Split> SplitManifest::by_id() const {
  return {assignment.begin(), assignment.end()};
}

SplitManifest split_pairs(const std::vector<std::string>& ids, const Ratios& ratios, std::uint64_t seed) {
  validate(ratios);
  const std::size_t n = ids.size();
  const auto dev = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios.dev + 1e-9));
  const auto test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios.test + 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x5911}));
  rng.shuffle(order);
  std::vector<Split> where(n, Split::kTrain);
  for (std::size_t i = 0; i < dev; ++i) where[order[i]] = Split::kDev;
  for (std::size_t i = dev; i < dev + test; ++i) where[order[i]] = Split::kTest;
  SplitManifest m;
  m.kind = "pairs";
  m.seed = seed;
  m.ratios = ratios;
  for (std::size_t i = 0; i < n; ++i) m.assignment.emplace_back(ids[i], where[i]);
  return m;
}

std::string record_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%07zu", index);
  return buf;
}

namespace {

// Largest-remainder allocation of n items over weights.
std::array<std::size_t, 3> allocate(std::size_t n, const std::array<double, 3>& w) {
  const double total = w[0] + w[1] + w[2];
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t used = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * w[i] / total;
    out[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[i] = exact - static_cast<double>(out[i]);
    used += out[i];
  }
  std::array<int, 3> idx = {0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (int k = 0; used < n; k = (k + 1) % 3, ++used) out[idx[k]] += 1;
  return out;
}

void check_disjoint(const SplitManifest& m, const std::vector<ingest::ConnRecord>& records) {
  std::set<AttackLabel> train, eval;
  for (std::size_t i = 0; i < m.assignment.size(); ++i) {
    const auto& r = records[std::stoul(m.assignment[i].first.substr(1))];
    if (r.label == AttackLabel::kBenign) continue;
    (m.assignment[i].second == Split::kTrain ? train : eval).insert(r.label);
  }
  for (AttackLabel l : train) {
    if (eval.count(l)) throw std::logic_error("attack label in both train and eval splits");
  }
}

}  // namespace

SplitManifest split_network(const std::vector<ingest::ConnRecord>& records, const NetworkSplitConfig& config,
                            std::uint64_t seed) {
  if (config.train_attacks.empty()) throw Error(Errc::kEmptyAttackClass, "no train attack labels");
  if (config.train_attacks.count(AttackLabel::kBenign)) {
    throw Error(Errc::kEmptyAttackClass, "Benign cannot be a train attack label");
  }
  std::vector<std::size_t> train_mal, eval_mal, benign;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AttackLabel l = records[i].label;
    if (l == AttackLabel::kBenign) {
      benign.push_back(i);
    } else if (config.train_attacks.count(l)) {
      train_mal.push_back(i);
    } else {
      eval_mal.push_back(i);
    }
  }
  if (train_mal.empty() != eval_mal.empty()) {
    throw Error(Errc::kEmptyAttackClass, train_mal.empty() ? "no records carry a train attack label"
                                                           : "no malicious records outside the train attacks");
  }
  Rng rng(derive_seed(seed, {0x4e7}));
  rng.shuffle(train_mal);
  rng.shuffle(eval_mal);
  rng.shuffle(benign);

  std::vector<std::optional<Split>> where(records.size());
  SplitManifest m;
  m.kind = "network";
  m.seed = seed;
  m.train_attack_labels = config.train_attacks;

  if (config.totals) {
    const NetworkTotals& t = *config.totals;
    if (t.train_malicious > t.train || t.dev_malicious > t.dev || t.test_malicious > t.test) {
      throw Error(Errc::kBadRatios, "malicious totals exceed split totals");
    }
    if (train_mal.size() < t.train_malicious) {
      throw Error(Errc::kEmptyAttackClass, "need " + std::to_string(t.train_malicious) + " train-attack records, have " +
                                               std::to_string(train_mal.size()));
    }
    if (eval_mal.size() < t.dev_malicious + t.test_malicious) {
      throw Error(Errc::kEmptyAttackClass, "need " + std::to_string(t.dev_malicious + t.test_malicious) +
                                               " held-out attack records, have " + std::to_string(eval_mal.size()));
    }
    const std::size_t need_benign = (t.train - t.train_malicious) + (t.dev - t.dev_malicious) + (t.test - t.test_malicious);
    if (benign.size() < need_benign) {
      throw Error(Errc::kInsufficientBenign,
                  "need " + std::to_string(need_benign) + " benign records, have " + std::to_string(benign.size()));
    }
    for (std::size_t i = 0; i < t.train_malicious; ++i) where[train_mal[i]] = Split::kTrain;
    for (std::size_t i = 0; i < t.dev_malicious; ++i) where[eval_mal[i]] = Split::kDev;
    for (std::size_t i = 0; i < t.test_malicious; ++i) where[eval_mal[t.dev_malicious + i]] = Split::kTest;
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.train - t.train_malicious; ++i) where[benign[k++]] = Split::kTrain;
    for (std::size_t i = 0; i < t.dev - t.dev_malicious; ++i) where[benign[k++]] = Split::kDev;
    for (std::size_t i = 0; i < t.test - t.test_malicious; ++i) where[benign[k++]] = Split::kTest;
  } else {
    for (std::size_t i : train_mal) where[i] = Split::kTrain;
    const std::size_t dev_mal = (eval_mal.size() + 1) / 2;
    for (std::size_t i = 0; i < eval_mal.size(); ++i) where[eval_mal[i]] = i < dev_mal ? Split::kDev : Split::kTest;
    auto odds = [](double share) { return share / (1.0 - share); };
    std::array<double, 3> w = {static_cast<double>(train_mal.size()) * odds(config.train_benign_share),
                               static_cast<double>(dev_mal) * odds(config.eval_benign_share),
                               static_cast<double>(eval_mal.size() - dev_mal) * odds(config.eval_benign_share)};
    if (!(w[0] + w[1] + w[2] > 0.0)) w = {75000.0, 37498.0, 37502.0};
    const auto alloc = allocate(benign.size(), w);
    std::size_t k = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < alloc[s]; ++i) where[benign[k++]] = static_cast<Split>(s);
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (where[i]) {
      m.assignment.emplace_back(record_id(i), *where[i]);
    } else {
      m.excluded.push_back(record_id(i));
    }
  }
  const double n = static_cast<double>(m.assignment.size());
  if (n > 0) {
    m.ratios = {static_cast<double>(m.count(Split::kTrain)) / n, static_cast<double>(m.count(Split::kDev)) / n,
                static_cast<double>(m.count(Split::kTest)) / n};
  }
  check_disjoint(m, records);
  return m;
}

std::vector<ingest::ConnRecord> merge_labels(std::vector<ingest::ConnRecord> records) {
  for (auto& r : records) r.is_malicious = r.label != AttackLabel::kBenign;
  return records;
}

void write_manifest(std::ostream& out, const SplitManifest& m) {
  out << "# kind: " << m.kind << '\n';
  out << "# seed: " << m.seed << '\n';
  out << "# ratios: " << format_double(m.ratios.train) << ' ' << format_double(m.ratios.dev) << ' '
      << format_double(m.ratios.test) << '\n';
  std::vector<std::string> labels;
  for (auto l : m.train_attack_labels) labels.emplace_back(ingest::label_name(l));
  out << "# train_attacks: " << join(labels, ",") << '\n';
  out << "# counts: " << m.count(Split::kTrain) << ' ' << m.count(Split::kDev) << ' ' << m.count(Split::kTest) << '\n';
  for (const auto& [id, s] : m.assignment) out << id << '\t' << split_name(s) << '\n';
  for (const auto& id : m.excluded) out << id << "\texcluded\n";
}

SplitManifest read_manifest(std::istream& in) {
  SplitManifest m;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(Errc::kParseError, "manifest line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(std::string_view(line).substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string key(trim(body.substr(0, colon)));
      const std::string value(trim(body.substr(colon + 1)));
      if (key == "kind") {
        m.kind = value;
      } else if (key == "seed") {
        std::uint64_t seed = 0;
        const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
        if (ec != std::errc{} || end != value.data() + value.size()) fail("bad seed");
        m.seed = seed;
      } else if (key == "ratios") {
        auto parts = split_whitespace(value);
        if (parts.size() != 3) fail("bad ratios");
        auto a = parse_double(parts[0]), b = parse_double(parts[1]), c = parse_double(parts[2]);
        if (!a || !b || !c) fail("bad ratios");
        m.ratios = {*a, *b, *c};
      } else if (key == "train_attacks" && !value.empty()) {
        for (const auto& name : split(value, ",")) m.train_attack_labels.insert(ingest::parse_iot23_label(name, "-"));
      }
      continue;
    }
    const auto cells = split(line, "\t");
    if (cells.size() != 2) fail("expected id<TAB>split");
    if (cells[1] == "excluded") {
      m.excluded.push_back(cells[0]);
      continue;
    }
    auto s = parse_split(cells[1]);
    if (!s) fail("unknown split '" + cells[1] + "'");
    m.assignment.emplace_back(cells[0], *s);
  }
  return m;
}

}  // namespace iotsql::splitter
