#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace growthlab {

/// Flat key = value text with [section] headers. '#' starts a comment.
/// Keys outside any section belong to section "".
class ConfigFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
  };

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  const std::string& text() const noexcept { return text_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool has_section(const std::string& section) const;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  double require_double(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

  /// Fails with a message naming the first section or key not in `schema`.
  void validate(const std::map<std::string, std::set<std::string>>& schema) const;

 private:
  std::string text_;
  std::vector<Entry> entries_;
};

/// Parses a real number; accepts "p/q" fractions such as 1/128.
double parse_number(const std::string& text);

}  // namespace growthlab
