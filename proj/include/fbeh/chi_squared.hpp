#ifndef FBEH_CHI_SQUARED_HPP
#define FBEH_CHI_SQUARED_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fbeh/tolerances.hpp"

namespace fbeh {

namespace detail {

// Regularized lower incomplete gamma P(a,x), series branch (x < a+1).
inline double gammp_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 2000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x), continued fraction branch (x >= a+1).
inline double gammq_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 2000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Regularized lower incomplete gamma P(a,x).
inline double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("reg_lower_gamma: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gammp_series(a, x);
  return 1.0 - detail::gammq_cf(a, x);
}

// Central chi-squared CDF with dof degrees of freedom.
inline double central_chisq_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return reg_lower_gamma(0.5 * dof, 0.5 * x);
}

// Non-central chi-squared CDF as a Poisson mixture of central chi-squared CDFs,
// summed outward from the Poisson mode so large noncentralities stay in range.
// Each sweep stops once its remaining mixture weight (bounded by the geometric
// decay of Poisson weights away from the mode) cannot move the sum by rel_tol.
// Throws computation_error with the partial sum if max_iter terms do not suffice.
inline double noncentral_chisq_cdf(double x, int dof, double noncentrality,
                                   const Tolerances& tol = Tolerances{}) {
  tol.validate();
  if (dof < 1) throw std::domain_error("noncentral_chisq_cdf: dof must be >= 1");
  if (noncentrality < 0.0)
    throw std::domain_error("noncentral_chisq_cdf: noncentrality must be >= 0");
  if (!(x >= 0.0)) throw std::domain_error("noncentral_chisq_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (noncentrality < 1e-300) return central_chisq_cdf(x, dof);

  const double lam = 0.5 * noncentrality;
  const double half_x = 0.5 * x;
  const double half_k = 0.5 * dof;
  const long mode = static_cast<long>(lam);

  const double logw_mode =
      (mode == 0) ? -lam : -lam + mode * std::log(lam) - std::lgamma(mode + 1.0);
  const double w_mode = std::exp(logw_mode);
  const double a_mode = half_k + mode;
  const double g_mode = reg_lower_gamma(a_mode, half_x);
  const double logt_mode = a_mode * std::log(half_x) - half_x - std::lgamma(a_mode + 1.0);
  const double t_mode = std::exp(logt_mode);

  double sum = w_mode * g_mode;
  long terms = 1;
  const auto check_budget = [&](const char* side) {
    if (++terms > tol.max_iter)
      throw computation_error(std::string("noncentral_chisq_cdf: Poisson mixture still has "
                                          "significant tail weight after max_iter terms (") +
                                  side + " sweep)",
                              sum);
  };

  // Downward sweep: j = mode-1 .. 0. Below the mode the weights decay with
  // ratio j/lam < 1; central terms are bounded by 1.
  {
    double w = w_mode, g = g_mode, t = t_mode;
    for (long j = mode - 1; j >= 0; --j) {
      w *= (j + 1.0) / lam;
      t = (t > 0.0) ? t * (half_k + j + 1.0) / half_x
                    : std::exp((half_k + j) * std::log(half_x) - half_x -
                               std::lgamma(half_k + j + 1.0));
      g = std::min(1.0, g + t);
      check_budget("downward");
      sum += w * g;
      const double ratio = static_cast<double>(j) / lam;  // < 1 below the mode
      const double remaining = w * ratio / (1.0 - ratio);
      if (remaining < tol.rel_tol * std::max(sum, 1e-300)) break;
    }
  }
  // Upward sweep: j = mode+1, ... Weights decay with ratio lam/(j+1) < 1 above
  // the mode; central terms decrease, so g bounds the remainder.
  {
    double w = w_mode, g = g_mode, t = t_mode;
    for (long j = mode + 1;; ++j) {
      w *= lam / j;
      g = std::max(0.0, g - t);  // P(a+1,x) = P(a,x) - t(a,x)
      t *= half_x / (half_k + j);
      check_budget("upward");
      sum += w * g;
      const double ratio = lam / (j + 1.0);
      if (ratio < 1.0) {
        const double remaining = w * ratio / (1.0 - ratio) * g;
        if (remaining < tol.rel_tol * std::max(sum, 1e-300)) break;
      }
    }
  }
  return std::min(1.0, std::max(0.0, sum));
}

// Quantile of the non-central chi-squared law by bracketed bisection on the CDF.
inline double noncentral_chisq_quantile(double p, int dof, double noncentrality,
                                        const Tolerances& tol = Tolerances{}) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("noncentral_chisq_quantile: p in (0,1)");
  double lo = 0.0;
  double hi = dof + noncentrality + 10.0 * std::sqrt(2.0 * (dof + 2.0 * noncentrality)) + 10.0;
  int expand = 0;
  while (noncentral_chisq_cdf(hi, dof, noncentrality, tol) < p) {
    hi *= 2.0;
    if (++expand > 200)
      throw computation_error("noncentral_chisq_quantile: bracket expansion failed", hi);
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (noncentral_chisq_cdf(mid, dof, noncentrality, tol) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < tol.abs_tol * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

struct BirgeBound {
  double quantile;  // dof + nc - 2*sqrt((dof + 2*nc) * t); may be negative
  double bound;     // e^{-t}
};

// Chernoff-type lower-tail bound for the non-central chi-squared law:
// Pr(chi <= dof + nc - 2*sqrt((dof + 2*nc) t)) <= e^{-t}.
inline BirgeBound birge_tail_bound(int dof, double noncentrality, double t) {
  if (dof < 1) throw std::domain_error("birge_tail_bound: dof must be >= 1");
  if (noncentrality < 0.0) throw std::domain_error("birge_tail_bound: noncentrality must be >= 0");
  if (!(t > 0.0)) throw std::domain_error("birge_tail_bound: t must be > 0");
  const double q = dof + noncentrality - 2.0 * std::sqrt((dof + 2.0 * noncentrality) * t);
  return BirgeBound{q, std::exp(-t)};
}

}  // namespace fbeh

#endif
