#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace iotsql::cli {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

// Every recognised key with its default.
const std::vector<ConfigKey>& config_keys();

// Fully resolved key/value configuration. Unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();  // all defaults

  // "key = value" lines, '#' comments. Throws Config.
  void merge_text(std::string_view text, std::string_view origin);
  void merge_file(const std::filesystem::path& path);
  // "key=value". Throws Config.
  void set(std::string_view assignment);
  void set(std::string_view key, std::string_view value);

  const std::string& get(std::string_view key) const;
  std::string path(std::string_view key) const { return get(key); }
  std::uint64_t get_u64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<std::string> get_list(std::string_view key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  // Sorted "key=value\n" lines; the hashed form.
  std::string canonical() const;
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Entry point behind the iotsql binary. Exit codes: 0 ok, 1 data error, 2 config error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iotsql::cli
