#include "mfatt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mfatt {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = strip(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + section + "." + key);
    sec[key] = strip(line.substr(eq + 1));
  }
  return cfg;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) throw ConfigError(origin_ + ": missing section [" + section + "]");
  const auto kt = it->second.find(key);
  if (kt == it->second.end()) throw ConfigError(origin_ + ": missing key " + section + "." + key);
  consumed_.insert(section + "." + key);
  return kt->second;
}

std::string Config::get_string(const std::string& section, const std::string& key) const { return raw(section, key); }

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? raw(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  const std::string& v = raw(section, key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw ConfigError(origin_ + ": " + section + "." + key + ": not a number: " + v);
  return x;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key) const {
  const std::string& v = raw(section, key);
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') throw ConfigError(origin_ + ": " + section + "." + key + ": not an integer: " + v);
  return x;
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(raw(section, key));
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError(origin_ + ": " + section + "." + key + ": not a number: " + tok);
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError(origin_ + ": " + section + "." + key + ": empty value");
  return out;
}

std::vector<std::string> Config::get_tokens(const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(raw(section, key));
  std::string tok;
  while (in >> tok) out.push_back(tok);
  if (out.empty()) throw ConfigError(origin_ + ": " + section + "." + key + ": empty value");
  return out;
}

void Config::check_consumed() const {
  for (const auto& [section, kv] : sections_)
    for (const auto& [key, value] : kv)
      if (!consumed_.count(section + "." + key))
        throw ConfigError(origin_ + ": unknown key " + section + "." + key + " (check spelling)");
}

}  // namespace mfatt
