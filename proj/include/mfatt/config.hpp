#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfatt/errors.hpp"

namespace mfatt {

/**
 * @brief Sectioned key-value config text.
 *
 * Format: `[section]` headers, `key = value` lines, `#` comments, blank lines
 * ignored. Values are parsed on access; every accessor records the key it
 * touched so check_consumed() can reject misspelled or leftover keys.
 */
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  /** Whitespace-separated numbers. */
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  /** Whitespace-separated words. */
  std::vector<std::string> get_tokens(const std::string& section, const std::string& key) const;

  /** Throws ConfigError naming any key that no accessor read. */
  void check_consumed() const;

 private:
  const std::string& raw(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::set<std::string> consumed_;
};

}  // namespace mfatt
