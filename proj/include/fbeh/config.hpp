#ifndef FBEH_CONFIG_HPP
#define FBEH_CONFIG_HPP

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fbeh/channel.hpp"
#include "fbeh/energy.hpp"

namespace fbeh {

using ConfigValue =
    std::variant<double, long long, std::string, std::vector<double>, std::vector<std::vector<double>>>;

struct ConfigError {
  int line;  // 1-based; 0 for file-level errors
  std::string message;
};

struct ParsedConfig {
  std::map<std::string, ConfigValue> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  double real(const std::string& key) const {
    const auto& v = values.at(key);
    if (std::holds_alternative<long long>(v)) return static_cast<double>(std::get<long long>(v));
    return std::get<double>(v);
  }
  long long integer(const std::string& key) const { return std::get<long long>(values.at(key)); }
  const std::string& text(const std::string& key) const { return std::get<std::string>(values.at(key)); }
  const std::vector<double>& vec(const std::string& key) const {
    return std::get<std::vector<double>>(values.at(key));
  }
  const std::vector<std::vector<double>>& matrix(const std::string& key) const {
    return std::get<std::vector<std::vector<double>>>(values.at(key));
  }
  double real_or(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }
  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  bool operator==(const ParsedConfig& other) const { return values == other.values; }
};

struct ParseResult {
  std::optional<ParsedConfig> config;  // present iff errors is empty
  std::vector<ConfigError> errors;
};

namespace detail {

enum class KeyType { real, integer, text, vec, matrix };

struct KeySpec {
  KeyType type;
  // Returns an error message for out-of-range values, empty when acceptable.
  std::string (*check)(const ConfigValue&);
};

inline std::string no_check(const ConfigValue&) { return {}; }

inline const std::map<std::string, KeySpec>& key_schema() {
  auto positive_real = [](const char* name) {
    return name;  // placeholder; checks are explicit lambdas below
  };
  (void)positive_real;
  static const std::map<std::string, KeySpec> schema = {
      {"noise_var", {KeyType::real, [](const ConfigValue& v) -> std::string {
                       return std::get<double>(v) > 0 ? "" : "noise_var must be > 0";
                     }}},
      {"mean_energy", {KeyType::real, [](const ConfigValue& v) -> std::string {
                         return std::get<double>(v) > 0 ? "" : "mean_energy must be > 0";
                       }}},
      {"energy_kind", {KeyType::text, [](const ConfigValue& v) -> std::string {
                         const auto& s = std::get<std::string>(v);
                         if (s == "constant" || s == "uniform" || s == "exponential" ||
                             s == "scaled_bernoulli" || s == "truncated_gaussian")
                           return "";
                         return "energy_kind must be one of constant, uniform, exponential, "
                                "scaled_bernoulli, truncated_gaussian";
                       }}},
      {"energy_a", {KeyType::real, [](const ConfigValue& v) -> std::string {
                      return std::get<double>(v) >= 0 ? "" : "energy_a must be >= 0";
                    }}},
      {"energy_b", {KeyType::real, [](const ConfigValue& v) -> std::string {
                      return std::get<double>(v) > 0 ? "" : "energy_b must be > 0";
                    }}},
      {"energy_rate", {KeyType::real, [](const ConfigValue& v) -> std::string {
                         return std::get<double>(v) > 0 ? "" : "energy_rate must be > 0";
                       }}},
      {"energy_p", {KeyType::real, [](const ConfigValue& v) -> std::string {
                      const double p = std::get<double>(v);
                      return p > 0 && p <= 1 ? "" : "energy_p must lie in (0,1]";
                    }}},
      {"energy_level", {KeyType::real, [](const ConfigValue& v) -> std::string {
                          return std::get<double>(v) > 0 ? "" : "energy_level must be > 0";
                        }}},
      {"energy_mu", {KeyType::real, no_check}},
      {"energy_sd", {KeyType::real, [](const ConfigValue& v) -> std::string {
                       return std::get<double>(v) > 0 ? "" : "energy_sd must be > 0";
                     }}},
      {"epsilon", {KeyType::real, [](const ConfigValue& v) -> std::string {
                     const double e = std::get<double>(v);
                     return e > 0 && e < 1 ? "" : "epsilon must lie in (0,1)";
                   }}},
      {"lambda", {KeyType::text, [](const ConfigValue& v) -> std::string {
                    const auto& s = std::get<std::string>(v);
                    if (s == "auto") return "";
                    try {
                      const double l = std::stod(s);
                      return l > 0 && l < 1 ? "" : "lambda must lie in (0,1) or be auto";
                    } catch (...) {
                      return "lambda must lie in (0,1) or be auto";
                    }
                  }}},
      {"mode", {KeyType::text, [](const ConfigValue& v) -> std::string {
                  const auto& s = std::get<std::string>(v);
                  return s == "explicit" || s == "asymptotic"
                             ? ""
                             : "mode must be explicit or asymptotic";
                }}},
      {"berry_esseen_constant", {KeyType::real, [](const ConfigValue& v) -> std::string {
                                   const double c = std::get<double>(v);
                                   return c > 0 && c <= 0.5
                                              ? ""
                                              : "berry_esseen_constant must lie in (0, 0.5]";
                                 }}},
      {"eta", {KeyType::real, [](const ConfigValue& v) -> std::string {
                 return std::get<double>(v) > 0 ? "" : "eta must be > 0";
               }}},
      {"n", {KeyType::integer, [](const ConfigValue& v) -> std::string {
               return std::get<long long>(v) >= 1 ? "" : "n must be >= 1";
             }}},
      {"trials", {KeyType::integer, [](const ConfigValue& v) -> std::string {
                    return std::get<long long>(v) >= 1 ? "" : "trials must be >= 1";
                  }}},
      {"seed", {KeyType::integer, [](const ConfigValue& v) -> std::string {
                  return std::get<long long>(v) >= 0 ? "" : "seed must be >= 0";
                }}},
      {"threshold_log2M", {KeyType::real, no_check}},
      {"delta_n_override", {KeyType::real, [](const ConfigValue& v) -> std::string {
                              return std::get<double>(v) > 0 ? "" : "delta_n_override must be > 0";
                            }}},
      {"u_n_override", {KeyType::real, [](const ConfigValue& v) -> std::string {
                          return std::get<double>(v) > 0 ? "" : "u_n_override must be > 0";
                        }}},
      {"w", {KeyType::matrix, [](const ConfigValue& v) -> std::string {
               const auto& m = std::get<std::vector<std::vector<double>>>(v);
               if (m.empty()) return "w must have at least one row";
               const std::size_t ny = m[0].size();
               if (ny == 0) return "w rows must be nonempty";
               for (const auto& row : m) {
                 if (row.size() != ny) return "w rows must have equal length";
                 double sum = 0;
                 for (double x : row) {
                   if (x < 0) return "w entries must be >= 0";
                   sum += x;
                 }
                 if (std::fabs(sum - 1.0) > 1e-12) return "w rows must sum to 1";
               }
               return "";
             }}},
      {"cost", {KeyType::vec, [](const ConfigValue& v) -> std::string {
                  const auto& c = std::get<std::vector<double>>(v);
                  if (c.empty()) return "cost must be nonempty";
                  double mn = 1e300;
                  for (double x : c) {
                    if (x < 0) return "cost entries must be >= 0";
                    mn = std::min(mn, x);
                  }
                  if (mn != 0.0) return "cost must include a zero-cost symbol";
                  return "";
                }}},
  };
  return schema;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

inline bool parse_integer(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

// Parses "[a, b, c]" into numbers; empty optional on malformed input.
inline std::optional<std::vector<double>> parse_vector(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') return std::nullopt;
  std::vector<double> out;
  std::string body = t.substr(1, t.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_number(trim(item), v)) return std::nullopt;
    out.push_back(v);
  }
  if (out.empty() && !trim(body).empty()) return std::nullopt;
  return out;
}

// Parses "[[...],[...]]" row lists.
inline std::optional<std::vector<std::vector<double>>> parse_matrix(const std::string& s) {
  const std::string t = trim(s);
  if (t.size() < 4 || t.front() != '[' || t.back() != ']') return std::nullopt;
  std::vector<std::vector<double>> rows;
  int depth = 0;
  std::string current;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const char c = t[i];
    if (c == '[') {
      ++depth;
      current.clear();
      if (depth != 1) return std::nullopt;
      current.push_back(c);
    } else if (c == ']') {
      --depth;
      if (depth != 0) return std::nullopt;
      current.push_back(c);
      auto row = parse_vector(current);
      if (!row || row->empty()) return std::nullopt;
      rows.push_back(*row);
    } else if (depth == 1) {
      current.push_back(c);
    } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
      return std::nullopt;
    }
  }
  if (depth != 0 || rows.empty()) return std::nullopt;
  return rows;
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Parses line-oriented `key = value` text with `#` comments. All errors are
// collected (not just the first), each carrying its 1-based line number.
inline ParseResult parse_config(const std::string& text) {
  ParseResult result;
  ParsedConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  const auto& schema = detail::key_schema();
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back({line_no, "expected `key = value`"});
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = schema.find(key);
    if (it == schema.end()) {
      result.errors.push_back({line_no, "unknown key `" + key + "`"});
      continue;
    }
    if (cfg.values.count(key)) {
      result.errors.push_back({line_no, "duplicate key `" + key + "`"});
      continue;
    }
    ConfigValue parsed;
    bool ok = true;
    switch (it->second.type) {
      case detail::KeyType::real: {
        double v;
        ok = detail::parse_number(value, v);
        if (ok) parsed = v;
        break;
      }
      case detail::KeyType::integer: {
        long long v;
        ok = detail::parse_integer(value, v);
        if (ok) parsed = v;
        break;
      }
      case detail::KeyType::text:
        parsed = value;
        break;
      case detail::KeyType::vec: {
        auto v = detail::parse_vector(value);
        ok = v.has_value();
        if (ok) parsed = *v;
        break;
      }
      case detail::KeyType::matrix: {
        auto v = detail::parse_matrix(value);
        ok = v.has_value();
        if (ok) parsed = *v;
        break;
      }
    }
    if (!ok) {
      result.errors.push_back({line_no, "type mismatch for `" + key + "`"});
      continue;
    }
    const std::string constraint = it->second.check(parsed);
    if (!constraint.empty()) {
      result.errors.push_back({line_no, constraint});
      continue;
    }
    cfg.values.emplace(key, std::move(parsed));
  }
  // Cross-key validation.
  const bool has_awgn = cfg.has("noise_var");
  const bool has_dmc = cfg.has("w") || cfg.has("cost");
  if (has_dmc && (!cfg.has("w") || !cfg.has("cost")))
    result.errors.push_back({0, "a DMC needs both `w` and `cost`"});
  if (has_dmc && cfg.has("w") && cfg.has("cost") &&
      cfg.matrix("w").size() != cfg.vec("cost").size())
    result.errors.push_back({0, "`cost` length must match the number of `w` rows"});
  if (has_awgn && has_dmc)
    result.errors.push_back({0, "specify either `noise_var` (AWGN) or `w`+`cost` (DMC), not both"});
  const std::string kind = cfg.has("energy_kind") ? cfg.text("energy_kind") : "constant";
  auto need = [&](const char* key) {
    if (!cfg.has(key))
      result.errors.push_back({0, std::string("energy_kind ") + kind + " requires `" + key + "`"});
  };
  if (kind == "constant") need("mean_energy");
  if (kind == "uniform") {
    need("energy_a");
    need("energy_b");
  }
  if (kind == "exponential") need("energy_rate");
  if (kind == "scaled_bernoulli") {
    need("energy_p");
    need("energy_level");
  }
  if (kind == "truncated_gaussian") {
    need("energy_mu");
    need("energy_sd");
  }
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

// Canonical serialization: alphabetical keys, full-precision reals. Reparsing
// the output yields an equal ParsedConfig.
inline std::string serialize_config(const ParsedConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : cfg.values) {
    out += key;
    out += " = ";
    if (std::holds_alternative<double>(value)) {
      out += detail::format_real(std::get<double>(value));
    } else if (std::holds_alternative<long long>(value)) {
      out += std::to_string(std::get<long long>(value));
    } else if (std::holds_alternative<std::string>(value)) {
      out += std::get<std::string>(value);
    } else if (std::holds_alternative<std::vector<double>>(value)) {
      out += "[";
      const auto& v = std::get<std::vector<double>>(value);
      for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + detail::format_real(v[i]);
      out += "]";
    } else {
      out += "[";
      const auto& m = std::get<std::vector<std::vector<double>>>(value);
      for (std::size_t r = 0; r < m.size(); ++r) {
        out += r ? ", [" : "[";
        for (std::size_t i = 0; i < m[r].size(); ++i)
          out += (i ? ", " : "") + detail::format_real(m[r][i]);
        out += "]";
      }
      out += "]";
    }
    out += "\n";
  }
  return out;
}

// Builders from validated configs.
inline EnergyProcess make_energy_process(const ParsedConfig& cfg) {
  const std::string kind = cfg.has("energy_kind") ? cfg.text("energy_kind") : "constant";
  if (kind == "constant") return EnergyProcess::constant(cfg.real("mean_energy"));
  if (kind == "uniform") return EnergyProcess::uniform(cfg.real("energy_a"), cfg.real("energy_b"));
  if (kind == "exponential") return EnergyProcess::exponential(cfg.real("energy_rate"));
  if (kind == "scaled_bernoulli")
    return EnergyProcess::scaled_bernoulli(cfg.real("energy_p"), cfg.real("energy_level"));
  return EnergyProcess::truncated_gaussian(cfg.real("energy_mu"), cfg.real("energy_sd"));
}

inline bool config_is_dmc(const ParsedConfig& cfg) { return cfg.has("w"); }

inline DmcSpec make_dmc(const ParsedConfig& cfg) {
  const auto& m = cfg.matrix("w");
  std::vector<double> flat;
  flat.reserve(m.size() * m[0].size());
  for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
  return DmcSpec(m.size(), m[0].size(), flat, cfg.vec("cost"));
}

}  // namespace fbeh

#endif
