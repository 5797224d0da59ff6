#include "growthlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string where(const std::string& section, const std::string& key) {
  return section.empty() ? key : "[" + section + "] " + key;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(ErrorCode::Config, "line " + std::to_string(line) + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(ErrorCode::Config, "line " + std::to_string(line) + ": empty section name");
      cfg.entries_.push_back({section, "", "", line});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Config, "line " + std::to_string(line) + ": expected key = value");
    Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) fail(ErrorCode::Config, "line " + std::to_string(line) + ": missing key");
    for (const Entry& prev : cfg.entries_)
      if (!prev.key.empty() && prev.section == e.section && prev.key == e.key)
        fail(ErrorCode::Config, "line " + std::to_string(line) + ": duplicate key " + where(e.section, e.key));
    cfg.entries_.push_back(std::move(e));
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Config, "cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

bool ConfigFile::has_section(const std::string& section) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.section == section; });
}

std::optional<std::string> ConfigFile::get(const std::string& section, const std::string& key) const {
  for (const Entry& e : entries_)
    if (e.section == section && e.key == key) return e.value;
  return std::nullopt;
}

std::string ConfigFile::require(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v) fail(ErrorCode::Config, "missing required key " + where(section, key));
  return *v;
}

double parse_number(const std::string& text) {
  const std::string s = trim(text);
  auto whole = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "not a number: '" + text + "'");
    }
    if (used != part.size()) fail(ErrorCode::Config, "not a number: '" + text + "'");
    return v;
  };
  const auto slash = s.find('/');
  double v;
  if (slash == std::string::npos) {
    v = whole(s);
  } else {
    const double den = whole(trim(s.substr(slash + 1)));
    if (den == 0.0) fail(ErrorCode::Config, "zero denominator in '" + text + "'");
    v = whole(trim(s.substr(0, slash))) / den;
  }
  if (!std::isfinite(v)) fail(ErrorCode::Config, "not a finite number: '" + text + "'");
  return v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  try {
    return parse_number(*v);
  } catch (const Error& e) {
    fail(ErrorCode::Config, where(section, key) + ": " + e.what());
  }
}

double ConfigFile::require_double(const std::string& section, const std::string& key) const {
  require(section, key);
  return get_double(section, key, 0.0);
}

long long ConfigFile::get_int(const std::string& section, const std::string& key, long long fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  const double d = get_double(section, key, 0.0);
  if (d != std::floor(d) || std::abs(d) > 9e15) fail(ErrorCode::Config, where(section, key) + ": expected an integer");
  return static_cast<long long>(d);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(ErrorCode::Config, where(section, key) + ": expected true or false");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  auto v = get(section, key);
  if (!v) return out;
  std::string item;
  std::istringstream in(*v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(ErrorCode::Config, where(section, key) + ": empty list item");
    try {
      out.push_back(parse_number(item));
    } catch (const Error& e) {
      fail(ErrorCode::Config, where(section, key) + ": " + e.what());
    }
  }
  return out;
}

void ConfigFile::validate(const std::map<std::string, std::set<std::string>>& schema) const {
  for (const Entry& e : entries_) {
    auto it = schema.find(e.section);
    if (it == schema.end()) {
      if (e.section.empty()) fail(ErrorCode::Config, "line " + std::to_string(e.line) + ": unknown key " + e.key + " outside any section");
      fail(ErrorCode::Config, "line " + std::to_string(e.line) + ": unknown section [" + e.section + "]");
    }
    if (!e.key.empty() && !it->second.count(e.key))
      fail(ErrorCode::Config, "line " + std::to_string(e.line) + ": unknown key " + where(e.section, e.key));
  }
}

}  // namespace growthlab
