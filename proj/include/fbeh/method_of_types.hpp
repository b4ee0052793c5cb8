#ifndef FBEH_METHOD_OF_TYPES_HPP
#define FBEH_METHOD_OF_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fbeh/channel.hpp"
#include "fbeh/hypotest.hpp"

namespace fbeh {

// Empirical distribution of an n-length sequence, stored as symbol counts.
struct TypeVector {
  std::vector<int> counts;
  int n = 0;

  std::vector<double> as_distribution() const {
    std::vector<double> d(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) d[i] = static_cast<double>(counts[i]) / n;
    return d;
  }
};

// All compositions of n into alphabet_size parts. Exhaustive tool: the sizes
// are capped so downstream enumerations stay tractable.
inline std::vector<TypeVector> enumerate_types(int alphabet_size, int n) {
  if (alphabet_size < 1 || alphabet_size > 4 || n < 1 || n > 20)
    throw std::domain_error("enumerate_types: exhaustive regime is alphabet_size <= 4, n <= 20");
  std::vector<TypeVector> out;
  std::vector<int> counts(alphabet_size, 0);
  const std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == alphabet_size - 1) {
      counts[pos] = remaining;
      out.push_back(TypeVector{counts, n});
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      rec(pos + 1, remaining - c);
    }
  };
  rec(0, n);
  return out;
}

inline TypeVector type_of_sequence(std::span<const int> seq, int alphabet_size) {
  TypeVector tv;
  tv.counts.assign(alphabet_size, 0);
  tv.n = static_cast<int>(seq.size());
  for (int s : seq) {
    if (s < 0 || s >= alphabet_size) throw std::domain_error("type_of_sequence: symbol out of range");
    ++tv.counts[s];
  }
  return tv;
}

// |T_P| as an exact multinomial coefficient (fits in 64 bits for n <= 20).
inline std::uint64_t type_class_size(const TypeVector& tv) {
  std::uint64_t result = 1;
  int placed = 0;
  for (int c : tv.counts) {
    for (int j = 1; j <= c; ++j) {
      result = result * static_cast<std::uint64_t>(placed + j) / j;  // exact: C(k,j) chain
    }
    placed += c;
  }
  return result;
}

// All sequences of the given type, via multiset permutations.
inline std::vector<std::vector<int>> enumerate_type_class(const TypeVector& tv) {
  std::vector<int> seq;
  seq.reserve(tv.n);
  for (std::size_t s = 0; s < tv.counts.size(); ++s)
    seq.insert(seq.end(), tv.counts[s], static_cast<int>(s));
  std::vector<std::vector<int>> out;
  do {
    out.push_back(seq);
  } while (std::next_permutation(seq.begin(), seq.end()));
  return out;
}

// Checks sup_{x in F_a} h(x) = sup_{P in F_a cap P_n} sup_{x in T_P} h(x) by
// evaluating both sides exhaustively: the left by direct sequence enumeration,
// the right through the type decomposition. The cost filter on both routes is
// computed as sum_counts * cost so the feasible sets match bit for bit.
inline bool ttt_check(const DmcSpec& ch, double a, int n,
                      const std::function<double(std::span<const int>)>& h) {
  const int k = static_cast<int>(ch.input_size());
  if (k > 4 || n > 12 || std::pow(static_cast<double>(k), n) > 2e6)
    throw std::domain_error("ttt_check: exhaustive regime only");
  const double budget = static_cast<double>(n) * a;
  auto cost_of_counts = [&](const std::vector<int>& counts) {
    double c = 0.0;
    for (int s = 0; s < k; ++s) c += counts[s] * ch.cost(s);
    return c;
  };

  // Left side: every sequence in F_a.
  double lhs = -std::numeric_limits<double>::infinity();
  std::vector<int> seq(n, 0);
  std::vector<int> counts(k, 0);
  counts[0] = n;
  for (;;) {
    if (cost_of_counts(counts) <= budget) lhs = std::max(lhs, h(seq));
    int pos = n - 1;
    while (pos >= 0 && seq[pos] == k - 1) {
      --counts[k - 1];
      seq[pos] = 0;
      ++counts[0];
      --pos;
    }
    if (pos < 0) break;
    --counts[seq[pos]];
    ++seq[pos];
    ++counts[seq[pos]];
  }

  // Right side: feasible types, then their classes.
  double rhs = -std::numeric_limits<double>::infinity();
  for (const TypeVector& tv : enumerate_types(k, n)) {
    if (cost_of_counts(tv.counts) > budget) continue;
    for (const auto& x : enumerate_type_class(tv)) rhs = std::max(rhs, h(x));
  }
  if (std::isinf(lhs) && std::isinf(rhs)) return true;  // both feasible sets empty
  return std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs));
}

// Max-min spread of beta_alpha(W^n(.|x), q_y^n) over a type class; the spread
// should be numerically zero for product reference measures.
inline double beta_type_invariance_check(const DmcSpec& ch, std::span<const double> q_y,
                                         const TypeVector& type, double alpha) {
  const int k = static_cast<int>(ch.input_size());
  const int ny = static_cast<int>(ch.output_size());
  const int n = type.n;
  if (k > 3 || ny > 3 || n > 6)
    throw std::domain_error("beta_type_invariance_check: exhaustive regime is |X|,|Y| <= 3, n <= 6");
  if (static_cast<int>(q_y.size()) != ny)
    throw std::domain_error("beta_type_invariance_check: q_y size mismatch");
  if (static_cast<int>(type.counts.size()) != k)
    throw std::domain_error("beta_type_invariance_check: type size mismatch");

  std::size_t out_count = 1;
  for (int i = 0; i < n; ++i) out_count *= ny;
  std::vector<double> p(out_count), q(out_count);

  double beta_min = std::numeric_limits<double>::infinity();
  double beta_max = -std::numeric_limits<double>::infinity();
  for (const auto& x : enumerate_type_class(type)) {
    std::vector<int> y(n, 0);
    for (std::size_t idx = 0; idx < out_count; ++idx) {
      double pw = 1.0, qw = 1.0;
      std::size_t rem = idx;
      for (int i = 0; i < n; ++i) {
        const int yi = static_cast<int>(rem % ny);
        rem /= ny;
        pw *= ch.w(x[i], yi);
        qw *= q_y[yi];
      }
      p[idx] = pw;
      q[idx] = qw;
    }
    const double beta = beta_discrete_exact(p, q, alpha).beta;
    beta_min = std::min(beta_min, beta);
    beta_max = std::max(beta_max, beta);
  }
  return beta_max - beta_min;
}

}  // namespace fbeh

#endif
