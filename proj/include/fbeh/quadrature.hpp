#ifndef FBEH_QUADRATURE_HPP
#define FBEH_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fbeh/tolerances.hpp"

namespace fbeh {

struct GaussHermiteRule {
  std::vector<double> nodes;    // roots of H_n, weight function e^{-t^2}
  std::vector<double> weights;  // sum of weights = sqrt(pi)
};

// Gauss-Hermite nodes/weights (physicists' convention) via Newton iteration on
// the normalized Hermite recurrence. Supports the orders the moment routines
// use (<= 128); the node initial guesses degrade beyond that.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1 || n > 128) throw std::domain_error("gauss_hermite: order must be in [1,128]");
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double eps = 1e-14;
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule.nodes[1];
    else
      z = 2.0 * z - rule.nodes[i - 2];
    double pp = 0.0;
    bool converged = false;
    for (int its = 0; its < 200; ++its) {
      double p1 = 0.7511255444649425;  // pi^{-1/4}
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= eps) {
        converged = true;
        break;
      }
    }
    if (!converged) throw computation_error("gauss_hermite: node iteration did not converge", z);
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  if (std::fabs(wsum - 1.7724538509055160273) > 1e-9)
    throw computation_error("gauss_hermite: weight sum check failed", wsum);
  return rule;
}

// Adaptive Simpson quadrature on [a,b].
namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                           double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace fbeh

#endif
