#include "critwave/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace critwave {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

namespace {

double parse_plain(std::string_view s) {
  if (s == "pi") return std::numbers::pi;
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("not a number: '" + std::string(s) + "'");
  return value;
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string s = trim(text);
  if (const auto star = s.find('*'); star != std::string::npos) {
    return parse_plain(trim(s.substr(0, star))) * parse_plain(trim(s.substr(star + 1)));
  }
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return parse_plain(trim(s.substr(0, slash))) / parse_plain(trim(s.substr(slash + 1)));
  }
  return parse_plain(s);
}

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside of a section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    auto& sec = cfg.values_[section];
    if (sec.contains(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + section + "." + key);
    sec[key] = value;
    cfg.lines_[section + "." + key] = line_no;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section);
  return it != values_.end() && it->second.contains(key);
}

const std::string* ConfigFile::find(const std::string& section, const std::string& key) {
  const auto it = values_.find(section);
  if (it == values_.end()) return nullptr;
  const auto kt = it->second.find(key);
  if (kt == it->second.end()) return nullptr;
  consumed_.insert(section + "." + key);
  return &kt->second;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key, const std::string& fallback) {
  const auto* v = find(section, key);
  return v ? *v : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) {
  const auto* v = find(section, key);
  if (!v) return fallback;
  try {
    return parse_real(*v);
  } catch (const ConfigError& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

long long ConfigFile::get_int(const std::string& section, const std::string& key, long long fallback) {
  const auto* v = find(section, key);
  if (!v) return fallback;
  long long value = 0;
  const auto* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError(section + "." + key + ": not an integer: '" + *v + "'");
  return value;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "on" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "off" || *v == "no" || *v == "0") return false;
  throw ConfigError(section + "." + key + ": not a boolean: '" + *v + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            std::vector<double> fallback) {
  const auto* v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split(*v, ',')) {
    try {
      out.push_back(parse_real(item));
    } catch (const ConfigError& e) {
      throw ConfigError(section + "." + key + ": " + e.what());
    }
  }
  return out;
}

void ConfigFile::reject_unconsumed() const {
  for (const auto& [section, keys] : values_) {
    for (const auto& [key, value] : keys) {
      const std::string full = section + "." + key;
      if (!consumed_.contains(full)) {
        throw ConfigError("line " + std::to_string(lines_.at(full)) + ": unknown key " + full);
      }
    }
  }
}

}  // namespace critwave
