#pragma once

// Flat key = value run configuration. Values keep their source text so the
// config hash is independent of how numbers print.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace diraclab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { integer, real, text, boolean };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string help;
};

/// Every accepted key. Flags are the keys with '_' spelled '-'.
const std::vector<KeySpec>& known_keys();

class RunConfig {
 public:
  /// Throws ConfigError naming the key for unknown keys or values of the wrong type.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  /// Reals accept decimal notation or an exact ratio "a/b" (e.g. q = 10/3).
  double real(const std::string& key, double fallback) const;
  bool boolean(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Parses `key = value` lines; '#' starts a comment. Errors cite the line number.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

/// 64-bit FNV-1a over "command\n" followed by sorted "key=value\n" lines. The output
/// directory is left out so reruns into different directories hash alike.
std::uint64_t config_hash(const std::string& command, const RunConfig& config);

double parse_real(const std::string& key, const std::string& value);
long long parse_integer(const std::string& key, const std::string& value);
bool parse_boolean(const std::string& key, const std::string& value);

}  // namespace diraclab::cli
