#include "dgh/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
  return out.str();
}

void RunConfig::set(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  kv_[key] = os.str();
}

void RunConfig::set(const std::string& key, int value) { kv_[key] = std::to_string(value); }

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw config_error("missing required config key '" + key + "'");
  return it->second;
}

double RunConfig::get_num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw config_error("config key '" + key + "': expected a number, got '" + it->second + "'");
  }
}

double RunConfig::require_num(const std::string& key) const {
  require(key);
  return get_num(key, 0.0);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (...) {
    throw config_error("config key '" + key + "': expected an integer, got '" + it->second + "'");
  }
}

std::vector<std::string> RunConfig::group_names(const std::string& prefix) const {
  std::set<std::string> names;
  const std::string p = prefix + ".";
  for (const auto& [k, v] : kv_) {
    if (k.compare(0, p.size(), p) != 0) continue;
    const auto dot = k.find('.', p.size());
    if (dot == std::string::npos) continue;
    names.insert(k.substr(p.size(), dot - p.size()));
  }
  return {names.begin(), names.end()};
}

}  // namespace dgh
