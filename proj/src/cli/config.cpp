#include <fstream>
#include <sstream>

#include "iotsql/cli/cli.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"

namespace iotsql::cli {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"seed", "7", "base seed for every stage"},
      {"synth.conn", "2000", "synthetic conn.log records"},
      {"synth.dns", "400", "synthetic dns.log records"},
      {"synth.http", "300", "synthetic http.log records"},
      {"synth.files", "200", "synthetic files.log records"},
      {"synth.ntp", "150", "synthetic ntp.log records"},
      {"synth.weird", "150", "synthetic weird.log records"},
      {"synth.readings_per_sensor", "300", "readings per sensor table"},
      {"synth.rooms", "51", "rooms in the synthetic building"},
      {"synth.address_pool", "64", "internal device addresses"},
      {"input.logs_dir", "", "directory with logs/, sensors/, devices.csv (default <out>/synth)"},
      {"input.conn_log", "", "labelled conn.log for the network split (default <logs_dir>/logs/conn.log)"},
      {"input.db", "", "database snapshot directory (default <out>/db)"},
      {"input.manual_pairs", "", "optional hand-written pairs (JSON lines)"},
      {"corpus.size", "10985", "generated text-SQL pairs"},
      {"corpus.template_weights", "", "comma list of ID=weight"},
      {"corpus.temporal_floor", "0.10", "minimum share of pairs with a datetime predicate"},
      {"corpus.max_attempts", "200", "resampling attempts per pair"},
      {"split.ratios", "0.6,0.2,0.2", "train,dev,test ratios for the text-SQL split"},
      {"split.train_attacks", "PartOfAHorizontalPortScan,Okiru", "attack labels seen in training"},
      {"split.network_mode", "proportional", "proportional | published_totals"},
      {"split.anonymize", "true", "replace addresses and shift timestamps of released records"},
      {"eval.rel_tol", "1e-6", "relative tolerance for numeric result comparison"},
      {"eval.timeout_ms", "5000", "per-query execution timeout"},
      {"baseline.models", "stratified,uniform,random_forest,linear_svm", "classifiers to train"},
      {"baseline.n_trees", "100", "forest size"},
      {"baseline.max_depth", "0", "tree depth limit, 0 = none"},
      {"baseline.max_features", "0", "features per split, 0 = sqrt(d)"},
      {"baseline.min_samples_split", "2", "smallest node that may split"},
      {"baseline.svm_epochs", "10", "SVM passes over the data"},
      {"baseline.svm_lr", "0.01", "SVM step size"},
      {"baseline.svm_l2", "1e-4", "SVM L2 penalty"},
      {"baseline.max_vocab", "32", "one-hot vocabulary per categorical column"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values_[std::string(k.name)] = std::string(k.default_value);
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  auto it = values_.find(k);
  if (it == values_.end()) throw Error(Errc::kConfig, "unknown key '" + k + "'");
  it->second = std::string(trim(value));
}

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw Error(Errc::kConfig, "expected key=value, got '" + std::string(assignment) + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::merge_text(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  for (const auto& raw : split(text, "\n")) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      set(line);
    } catch (const Error& e) {
      throw Error(Errc::kConfig, std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kConfig, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) throw Error(Errc::kConfig, "unknown key '" + std::string(key) + "'");
  return it->second;
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
  auto v = parse_int(get(key));
  if (!v || *v < 0) throw Error(Errc::kConfig, std::string(key) + " must be a non-negative integer");
  return static_cast<std::uint64_t>(*v);
}

double RunConfig::get_double(std::string_view key) const {
  auto v = parse_double(get(key));
  if (!v) throw Error(Errc::kConfig, std::string(key) + " must be a number");
  return *v;
}

bool RunConfig::get_bool(std::string_view key) const {
  const std::string v = to_lower(get(key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(Errc::kConfig, std::string(key) + " must be true or false");
}

std::vector<std::string> RunConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& part : split(get(key), ",")) {
    auto t = trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return out;
}

}  // namespace iotsql::cli
