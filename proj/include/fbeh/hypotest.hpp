#ifndef FBEH_HYPOTEST_HPP
#define FBEH_HYPOTEST_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fbeh/chi_squared.hpp"
#include "fbeh/tolerances.hpp"

namespace fbeh {

// Optimal randomized binary-hypothesis test and its type-II error.
struct NPTestResult {
  double threshold;      // likelihood-ratio cutoff at the boundary outcome
  double randomization;  // acceptance probability on the boundary outcome
  double beta;           // Q-mass of the acceptance region
  double achieved_power; // P-mass of the acceptance region (= alpha)
};

// Exact Neyman-Pearson construction on a finite alphabet: sort outcomes by
// likelihood ratio p/q descending (q = 0 outcomes first, at zero q-cost; ties
// broken by outcome index for reproducibility), accumulate p-mass to alpha and
// randomize on the boundary outcome.
inline NPTestResult beta_discrete_exact(std::span<const double> p, std::span<const double> q,
                                        double alpha) {
  if (p.size() != q.size() || p.empty())
    throw std::domain_error("beta_discrete_exact: distributions must share an alphabet");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("beta_discrete_exact: alpha must lie in (0,1)");
  double psum = 0.0, qsum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw std::domain_error("beta_discrete_exact: negative mass");
    psum += p[i];
    qsum += q[i];
  }
  if (std::fabs(psum - 1.0) > 1e-9 || std::fabs(qsum - 1.0) > 1e-9)
    throw std::domain_error("beta_discrete_exact: inputs must be normalized");

  std::vector<std::size_t> order;
  order.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) order.push_back(i);  // p = 0 outcomes never help the power
  auto lr = [&](std::size_t i) {
    return q[i] == 0.0 ? std::numeric_limits<double>::infinity() : p[i] / q[i];
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lr(a) > lr(b); });

  double cum_p = 0.0, cum_q = 0.0;
  for (std::size_t idx : order) {
    if (cum_p + p[idx] < alpha) {
      cum_p += p[idx];
      cum_q += q[idx];
      continue;
    }
    const double theta = (alpha - cum_p) / p[idx];
    return NPTestResult{lr(idx), theta, cum_q + theta * q[idx], alpha};
  }
  // Unreachable for normalized p with alpha < 1; kept for fp edge cases.
  return NPTestResult{0.0, 1.0, cum_q, cum_p};
}

// Lower bound on beta_alpha(P,Q): sup over gamma > 0 of (alpha - P[dP/dQ >= gamma])+ / gamma,
// evaluated on the caller's grid. p_tail(gamma) = P[dP/dQ >= gamma].
inline double beta_lower_bound(const std::function<double(double)>& p_tail, double alpha,
                               std::span<const double> gamma_grid) {
  if (gamma_grid.empty()) throw std::domain_error("beta_lower_bound: empty gamma grid");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("beta_lower_bound: alpha in (0,1)");
  double best = 0.0;
  for (double gamma : gamma_grid) {
    if (!(gamma > 0.0)) throw std::domain_error("beta_lower_bound: gamma must be > 0");
    const double v = std::max(0.0, alpha - p_tail(gamma)) / gamma;
    best = std::max(best, v);
  }
  return best;
}

namespace detail {
inline Tolerances wide_chisq_tol() {
  Tolerances t;
  t.abs_tol = 1e-12;
  t.rel_tol = 1e-12;
  t.max_iter = 200000;  // mixture terms scale with the noncentrality
  return t;
}
}  // namespace detail

// Exact beta for the Gaussian product pair
//   P = N(x, noise_var I_n),  Q = N(0, (s + noise_var) I_n).
// The likelihood ratio is monotone decreasing in T = sum_i (y_i - c x_i)^2 with
// c = (s + noise_var)/s, so the optimal acceptance region is a lower tail of T.
// T/noise_var is noncentral chi^2(n, |x|^2 noise_var/s^2) under P and
// T/(s+noise_var) is noncentral chi^2(n, |x|^2 (s+noise_var)/s^2) under Q;
// beta depends on x only through |x|^2.
inline double beta_gaussian_product_exact(double x_norm_sq, int n, double noise_var, double s,
                                          double alpha) {
  if (x_norm_sq < 0.0) throw std::domain_error("beta_gaussian_product_exact: |x|^2 >= 0");
  if (n < 1) throw std::domain_error("beta_gaussian_product_exact: n >= 1");
  if (!(noise_var > 0.0)) throw std::domain_error("beta_gaussian_product_exact: noise_var > 0");
  if (!(s > 0.0)) throw std::domain_error("beta_gaussian_product_exact: s > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("beta_gaussian_product_exact: alpha in (0,1)");
  const Tolerances tol = detail::wide_chisq_tol();
  const double nc_p = x_norm_sq * noise_var / (s * s);
  const double nc_q = x_norm_sq * (s + noise_var) / (s * s);
  const double t_p = noncentral_chisq_quantile(alpha, n, nc_p, tol);  // T/noise_var quantile
  const double t_q = t_p * noise_var / (s + noise_var);
  return noncentral_chisq_cdf(t_q, n, nc_q, tol);
}

// Upper bounds and the exact value of the information-density lower-deviation
// probability P[dP/dQ >= e^{n C_s - zeta}] for the Gaussian pair above, with
// zeta < 0 in nats and |x|^2 <= n s.
struct InfoDensityTail {
  double chi2_bound;   // exp(-zeta^2 / (2 n V_s)); V_s evaluated at |x|^2 = n s
  double fort1_bound;  // exp(-zeta^2 / (4 rho^2 (n + 2 B))), B the actual noncentrality
  double exact_tail;   // noncentral chi^2 CDF of the underlying statistic
};

inline InfoDensityTail info_density_tail(double x_norm_sq, int n, double noise_var, double s,
                                         double zeta) {
  if (!(zeta < 0.0)) throw std::domain_error("info_density_tail: zeta must be < 0");
  if (x_norm_sq < 0.0 || x_norm_sq > n * s * (1.0 + 1e-12))
    throw std::domain_error("info_density_tail: need 0 <= |x|^2 <= n s");
  if (n < 1 || !(noise_var > 0.0) || !(s > 0.0))
    throw std::domain_error("info_density_tail: bad channel parameters");
  const double rho = s / (2.0 * (s + noise_var));  // nats
  const double v_s = s * (s + 2.0 * noise_var) /
                     (2.0 * (s + noise_var) * (s + noise_var));  // nats^2
  const double b = x_norm_sq * noise_var / (s * s);
  InfoDensityTail out;
  out.chi2_bound = std::exp(-zeta * zeta / (2.0 * n * v_s));
  out.fort1_bound = std::exp(-zeta * zeta / (4.0 * rho * rho * (n + 2.0 * b)));
  const double threshold = zeta / rho + n + b;
  out.exact_tail = threshold <= 0.0
                       ? 0.0
                       : noncentral_chisq_cdf(threshold, n, b, detail::wide_chisq_tol());
  return out;
}

}  // namespace fbeh

#endif
