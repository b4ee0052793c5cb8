#ifndef FBEH_BOUND_RESULT_HPP
#define FBEH_BOUND_RESULT_HPP

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace fbeh {

enum class BoundMode { explicit_chain, asymptotic };

inline const char* to_string(BoundMode m) {
  return m == BoundMode::explicit_chain ? "explicit" : "asymptotic";
}

// Labeled breakdown of a code-size bound, in bits.
struct BoundTerms {
  double first_order = 0.0;
  double second_order = 0.0;
  double log_term = 0.0;
  double constant_term = 0.0;
  double sum() const { return first_order + second_order + log_term + constant_term; }
};

// A value of log2 M with its per-term breakdown, validity flag and named
// intermediate quantities for inspection downstream.
struct BoundResult {
  double log2_M = std::numeric_limits<double>::quiet_NaN();
  BoundTerms terms;
  bool valid = false;
  std::string invalid_reason;
  std::map<std::string, double> diagnostics;

  double diag(const std::string& key) const {
    auto it = diagnostics.find(key);
    return it == diagnostics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  }
  bool has_diag(const std::string& key) const { return diagnostics.count(key) > 0; }

  static BoundResult infeasible(std::string reason) {
    BoundResult r;
    r.valid = false;
    r.invalid_reason = std::move(reason);
    return r;
  }
};

}  // namespace fbeh

#endif
