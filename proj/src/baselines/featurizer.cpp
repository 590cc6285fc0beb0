#include <algorithm>
#include <map>

#include "iotsql/baselines/baselines.hpp"
#include "iotsql/common/error.hpp"

namespace iotsql::baselines {

namespace {

std::optional<double> numeric_value(const ingest::ConnRecord& r, std::size_t k) {
  auto opt = [](const auto& o) -> std::optional<double> {
    if (!o) return std::nullopt;
    return static_cast<double>(*o);
  };
  switch (k) {
    case 0: return opt(r.duration);
    case 1: return opt(r.orig_bytes);
    case 2: return opt(r.resp_bytes);
    case 3: return static_cast<double>(r.missed_bytes);
    case 4: return static_cast<double>(r.orig_pkts);
    case 5: return static_cast<double>(r.orig_ip_bytes);
    case 6: return static_cast<double>(r.resp_pkts);
    case 7: return static_cast<double>(r.resp_ip_bytes);
    case 8: return static_cast<double>(r.orig_p);
    default: return static_cast<double>(r.resp_p);
  }
}

}  // namespace

std::string categorical_value(const ingest::ConnRecord& r, std::string_view column) {
  auto flag = [](const std::optional<bool>& b) -> std::string { return b ? (*b ? "T" : "F") : "-"; };
  if (column == "proto") return r.proto;
  if (column == "service") return r.service.value_or("-");
  if (column == "conn_state") return r.conn_state;
  if (column == "history") return r.history.value_or("-");
  if (column == "local_orig") return flag(r.local_orig);
  if (column == "local_resp") return flag(r.local_resp);
  throw Error(Errc::kUnknownIdentifier, "no categorical feature '" + std::string(column) + "'");
}

std::size_t Featurizer::dim() const {
  std::size_t d = kNumericFeatures.size() + kOptionalNumerics.size();
  for (const auto& v : vocab) d += v.size() + 1;
  return d;
}

std::vector<std::string> Featurizer::feature_names() const {
  std::vector<std::string> out(kNumericFeatures.begin(), kNumericFeatures.end());
  for (auto n : kOptionalNumerics) out.push_back("has_" + std::string(n));
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    const std::string col(kCategoricalFeatures[c]);
    for (const auto& v : vocab[c]) out.push_back(col + "=" + v);
    out.push_back(col + "=<other>");
  }
  return out;
}

void Featurizer::transform(const ingest::ConnRecord& r, double* out) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < kNumericFeatures.size(); ++i) out[k++] = numeric_value(r, i).value_or(0.0);
  for (std::size_t i = 0; i < kOptionalNumerics.size(); ++i) out[k++] = numeric_value(r, i) ? 1.0 : 0.0;
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    const std::string v = categorical_value(r, kCategoricalFeatures[c]);
    const auto& voc = vocab[c];
    auto it = std::lower_bound(voc.begin(), voc.end(), v);
    const std::size_t hot = (it != voc.end() && *it == v) ? static_cast<std::size_t>(it - voc.begin()) : voc.size();
    for (std::size_t j = 0; j <= voc.size(); ++j) out[k++] = j == hot ? 1.0 : 0.0;
  }
}

std::vector<double> Featurizer::transform(const ingest::ConnRecord& r) const {
  std::vector<double> out(dim());
  transform(r, out.data());
  return out;
}

Matrix Featurizer::transform(const std::vector<ingest::ConnRecord>& records) const {
  Matrix m(records.size(), dim());
  for (std::size_t i = 0; i < records.size(); ++i) transform(records[i], m.row(i));
  return m;
}

Featurizer fit_featurizer(const std::vector<ingest::ConnRecord>& records, const FeaturizerConfig& config) {
  if (records.empty()) throw Error(Errc::kEmpty, "cannot fit a featurizer on zero records");
  Featurizer f;
  for (auto col : kCategoricalFeatures) {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) ++counts[categorical_value(r, col)];
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > config.max_vocab) ranked.resize(config.max_vocab);
    std::vector<std::string> voc;
    for (auto& [v, n] : ranked) voc.push_back(v);
    std::sort(voc.begin(), voc.end());
    f.vocab.push_back(std::move(voc));
  }
  return f;
}

}  // namespace iotsql::baselines
