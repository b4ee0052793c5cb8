#ifndef FBEH_GAUSSIAN_HPP
#define FBEH_GAUSSIAN_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbeh/tolerances.hpp"

namespace fbeh {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kLog2E = 1.4426950408889634074;  // bits per nat

inline double nats_to_bits(double x) { return x * kLog2E; }
inline double bits_to_nats(double x) { return x / kLog2E; }

namespace detail {

// erf for |x| < 2 by the confluent series 2x e^{-x^2}/sqrt(pi) * sum (2x^2)^k / (2k+1)!!.
// All terms positive, no cancellation.
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  double denom = 1.0;
  for (int k = 1; k < 200; ++k) {
    denom += 2.0;
    term *= 2.0 * x2 / denom;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return 1.1283791670955125739 * x * std::exp(-x2) * sum;  // 2/sqrt(pi)
}

// erfc for x >= 2 by the Laplace continued fraction, modified Lentz.
// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
inline double erfc_cf(double x) {
  const double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 300; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x * x) / (1.7724538509055160273 * f);  // sqrt(pi)
}

}  // namespace detail

// Complementary error function, in-repo kernel (series + continued fraction).
inline double erfc_kernel(double x) {
  if (std::isnan(x)) throw std::domain_error("erfc_kernel: non-finite input");
  if (x >= 0.0) {
    if (x < 2.0) return 1.0 - detail::erf_series(x);
    if (x > 27.5) return 0.0;  // below double underflow of e^{-x^2}
    return detail::erfc_cf(x);
  }
  return 2.0 - erfc_kernel(-x);
}

// Standard normal density.
inline double phi_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

// Standard normal CDF.
inline double phi_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("phi_cdf: non-finite input");
  return 0.5 * erfc_kernel(-x / kSqrt2);
}

namespace detail {

// Acklam's rational approximation to Phi^{-1}, |error| < 1.15e-9 before refinement.
inline double phi_inv_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Inverse standard normal CDF: rational initializer plus Halley refinement
// against the in-repo erfc kernel.
inline double phi_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("phi_inv: p must lie in (0,1)");
  double x = detail::phi_inv_estimate(p);
  for (int i = 0; i < 3; ++i) {
    const double e = phi_cdf(x) - p;
    const double u = e / phi_pdf(x);
    const double step = u / (1.0 + 0.5 * x * u);  // Halley
    x -= step;
    if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

// Derivative of Phi^{-1}: f'(p) = 1/phi(Phi^{-1}(p)). Positive, minimized at p = 1/2.
inline double phi_inv_deriv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("phi_inv_deriv: p must lie in (0,1)");
  return 1.0 / phi_pdf(phi_inv(p));
}

}  // namespace fbeh

#endif
