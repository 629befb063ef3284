#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace diraclab::cli {

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      {"out", ValueType::text, "output directory"},
      {"seed", ValueType::integer, "random seed"},
      {"threads", ValueType::integer, "worker threads"},
      {"grid_n", ValueType::integer, "cells per axis"},
      {"grid_l", ValueType::real, "box half-width"},
      {"r_outer", ValueType::real, "outer radius of the exterior annulus"},
      {"eps_in", ValueType::real, "inner radius of the punctured ball (0 selects 2h)"},
      {"t_min", ValueType::real, "lower end of the t grid"},
      {"t_max", ValueType::real, "upper end of the t grid"},
      {"t_count", ValueType::integer, "points in the t grid"},
      {"p", ValueType::real, "integrability exponent p"},
      {"q", ValueType::real, "exponent q"},
      {"k", ValueType::real, "exponent k"},
      {"t", ValueType::real, "weight exponent t"},
      {"s", ValueType::real, "exponent s"},
      {"alpha", ValueType::real, "Besov exponent (negative)"},
      {"potential", ValueType::text, "potential: loss_yau, zero or coulomb:<c>"},
      {"variant", ValueType::text, "inequality: dsineq, cor1 or cor2"},
      {"budget", ValueType::integer, "ratio evaluations for extremal-search"},
      {"trials", ValueType::integer, "random trials for inequality-check"},
      {"campaign", ValueType::text, "inequality-check campaign: trials or lemma"},
      {"field", ValueType::text, "spinor field file for norms (empty: built-in sample)"},
      {"samples", ValueType::integer, "random points for the frame sweep"},
      {"identity_n", ValueType::integer, "grid for the transform identity"},
      {"jacobian_n", ValueType::integer, "grid for the change-of-variables check"},
      {"test_functions", ValueType::integer, "bump test functions for the weak equation"},
      {"bins", ValueType::integer, "log-radial shells for the decay fit"},
      {"r_fit_min", ValueType::real, "decay fit lower radius"},
      {"r_fit_max", ValueType::real, "decay fit upper radius"},
      {"tol_clifford", ValueType::real, "Clifford identity tolerance"},
      {"tol_frames", ValueType::real, "inversion frame tolerance"},
      {"tol_identity", ValueType::real, "transform identity relative tolerance"},
      {"tol_jacobian", ValueType::real, "change-of-variables relative tolerance"},
      {"tol_weak", ValueType::real, "weak-equation pairing tolerance"},
      {"tol_residual", ValueType::real, "zero-mode residual tolerance"},
      {"tol_tail", ValueType::real, "tail fraction tolerance"},
      {"tol_slope", ValueType::real, "decay slope tolerance"},
      {"tol_lemma_slope", ValueType::real, "proof-quantity slope tolerance"},
      {"tol_scale", ValueType::real, "ratio scale-invariance tolerance"},
  };
  return keys;
}

namespace {

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : known_keys())
    if (k.key == key) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double_exact(const std::string& s, double& v) {
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  return r.ec == std::errc() && r.ptr == end && std::isfinite(v);
}

}  // namespace

double parse_real(const std::string& key, const std::string& value) {
  double v = 0;
  if (const auto slash = value.find('/'); slash != std::string::npos) {
    double a = 0, b = 0;
    if (parse_double_exact(trim(value.substr(0, slash)), a) && parse_double_exact(trim(value.substr(slash + 1)), b) &&
        b != 0)
      return a / b;
  } else if (parse_double_exact(value, v)) {
    return v;
  }
  throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long v = 0;
  const char* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  return v;
}

bool parse_boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError("unknown configuration key '" + key + "'");
  const std::string value = trim(raw);
  switch (spec->type) {
    case ValueType::integer: parse_integer(key, value); break;
    case ValueType::real: parse_real(key, value); break;
    case ValueType::boolean: parse_boolean(key, value); break;
    case ValueType::text: break;
  }
  values_[key] = value;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

long long RunConfig::integer(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_integer(key, it->second);
}

double RunConfig::real(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_real(key, it->second);
}

bool RunConfig::boolean(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_boolean(key, it->second);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config_text(s.str(), path);
}

std::uint64_t config_hash(const std::string& command, const RunConfig& config) {
  std::string canon = command + "\n";
  for (const auto& [k, v] : config.values())
    if (k != "out") canon += k + "=" + v + "\n";
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace diraclab::cli
