#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace critwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text grouped under `[section]` headers. `#` and `;`
/// start comments. Every key read through the typed accessors is marked as
/// consumed; `reject_unconsumed` then turns leftovers into a ConfigError.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback);
  double get_double(const std::string& section, const std::string& key, double fallback);
  long long get_int(const std::string& section, const std::string& key, long long fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& section, const std::string& key, std::vector<double> fallback);

  void reject_unconsumed() const;

 private:
  const std::string* find(const std::string& section, const std::string& key);

  std::map<std::string, std::map<std::string, std::string>> values_;
  std::map<std::string, int> lines_;  // "section.key" -> line number
  std::set<std::string> consumed_;
};

/// Parses a real; accepts `pi`, `inf`, and `k*pi` / `pi/k` forms.
double parse_real(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace critwave
