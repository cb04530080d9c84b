#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dgh {

/// Flat key-value run configuration ("key = value" lines, '#' comments,
/// dotted keys forming sections). Serialization writes keys sorted, so
/// serialize(parse(text)) is idempotent.
class RunConfig {
public:
  RunConfig() = default;
  static RunConfig parse(const std::string& text);
  std::string serialize() const;

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);

  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::string require(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  double require_num(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;

  /// Keys matching prefix + ".*"; returns the distinct middle segments, e.g.
  /// group_names("bc") for keys bc.top.type, bc.bottom.type -> {top, bottom}.
  std::vector<std::string> group_names(const std::string& prefix) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
};

}  // namespace dgh
