#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "fbeh/chi_squared.hpp"
#include "fbeh/gaussian.hpp"
#include "fbeh/info_density.hpp"
#include "fbeh/quadrature.hpp"
#include "fbeh/rng.hpp"

using namespace fbeh;

namespace {

// Independent quadrature oracle for Phi: adaptive Simpson on the Gaussian
// density, written here so it shares nothing with the library's erfc path.
double phi_oracle(double x) {
  const auto density = [](double u) {
    return std::exp(-0.5 * u * u) / 2.5066282746310005024;
  };
  double lo = -12.0;
  std::function<double(double, double, double, int)> simpson =
      [&](double a, double b, double tol, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double s1 = (b - a) / 6.0 * (density(a) + 4.0 * density(m) + density(b));
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double s2 = (m - a) / 6.0 * (density(a) + 4.0 * density(lm) + density(m)) +
                      (b - m) / 6.0 * (density(m) + 4.0 * density(rm) + density(b));
    if (depth <= 0 || std::fabs(s2 - s1) < 15.0 * tol) return s2 + (s2 - s1) / 15.0;
    return simpson(a, m, 0.5 * tol, depth - 1) + simpson(m, b, 0.5 * tol, depth - 1);
  };
  return simpson(lo, x, 1e-13, 48);
}

}  // namespace

TEST_CASE("phi_cdf basic values") {
  CHECK(phi_cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(phi_cdf(40.0) == Catch::Approx(1.0).margin(1e-10));
  // Quadrature oracle at x = 1.
  const double oracle = phi_oracle(1.0);
  CHECK(std::fabs(phi_cdf(1.0) - oracle) < 1e-10);
  CHECK(phi_cdf(1.0) == Catch::Approx(0.841345).margin(5e-7));
  CHECK_THROWS_AS(phi_cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(phi_cdf(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("phi_cdf monotone and accurate on a grid") {
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -8.0 + 16.0 * i / 200.0;
    const double v = phi_cdf(x);
    CHECK(v >= prev);
    prev = v;
    if (std::fabs(x) < 5.0) CHECK(std::fabs(v - phi_oracle(x)) < 1e-10);
  }
}

TEST_CASE("phi_inv basic values and symmetry") {
  CHECK(std::fabs(phi_inv(0.5)) < 1e-14);
  // Bisection oracle on phi_cdf.
  const double target = phi_cdf(1.0);
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_cdf(mid) < target ? lo : hi) = mid;
  }
  CHECK(phi_inv(target) == Catch::Approx(0.5 * (lo + hi)).margin(1e-6));
  CHECK(phi_inv(target) == Catch::Approx(1.0).margin(1e-9));
  for (double p : {1e-8, 1e-4, 0.1, 0.3, 0.49}) {
    CHECK(phi_inv(p) == Catch::Approx(-phi_inv(1.0 - p)).margin(1e-10));
  }
  CHECK_THROWS_AS(phi_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(phi_inv(1.0), std::domain_error);
}

TEST_CASE("phi_cdf and phi_inv are inverse on a 1000-point grid") {
  for (int i = 0; i < 1000; ++i) {
    // Log-spaced toward both endpoints of (1e-9, 1 - 1e-9).
    const double t = (i + 0.5) / 1000.0;
    const double p = std::exp(std::log(1e-9) * (1.0 - t) + std::log(1.0 - 1e-9) * t);
    CHECK(std::fabs(phi_cdf(phi_inv(p)) - p) < 1e-10);
  }
}

TEST_CASE("phi_inv_deriv values, symmetry and finite differences") {
  CHECK(phi_inv_deriv(0.5) == Catch::Approx(kSqrt2Pi).margin(1e-12));
  for (double p : {0.05, 0.2, 0.35}) {
    CHECK(phi_inv_deriv(p) == Catch::Approx(phi_inv_deriv(1.0 - p)).margin(1e-9));
  }
  const double h = 1e-6;
  const double fd = (phi_inv(0.1 + h) - phi_inv(0.1 - h)) / (2.0 * h);
  CHECK(std::fabs(phi_inv_deriv(0.1) - fd) / fd < 1e-4);
  // Positive, minimized at 1/2.
  CHECK(phi_inv_deriv(0.5) < phi_inv_deriv(0.3));
  CHECK(phi_inv_deriv(0.5) < phi_inv_deriv(0.7));
}

TEST_CASE("noncentral chi-squared closed-form and boundary cases") {
  // Central chi^2 with 2 dof has CDF 1 - e^{-x/2}.
  CHECK(noncentral_chisq_cdf(2.0, 2, 0.0) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
  CHECK(noncentral_chisq_cdf(0.0, 5, 3.0) == 0.0);
  CHECK_THROWS_AS(noncentral_chisq_cdf(-1.0, 2, 0.0), std::domain_error);
  CHECK_THROWS_AS(noncentral_chisq_cdf(1.0, 0, 0.0), std::domain_error);
  CHECK_THROWS_AS(noncentral_chisq_cdf(1.0, 2, -0.5), std::domain_error);
}

TEST_CASE("noncentral chi-squared against seeded Monte Carlo") {
  const double x = 6.0;
  const int dof = 3;
  const double nc = 1.5;
  const long samples = 10000000;
  Rng rng(20240811ULL);
  const double shift = std::sqrt(nc);
  long count = 0;
  for (long i = 0; i < samples; ++i) {
    const double z1 = rng.normal() + shift;
    const double z2 = rng.normal();
    const double z3 = rng.normal();
    if (z1 * z1 + z2 * z2 + z3 * z3 <= x) ++count;
  }
  const double emp = static_cast<double>(count) / samples;
  const double se = std::sqrt(emp * (1.0 - emp) / samples);
  CHECK(std::fabs(noncentral_chisq_cdf(x, dof, nc) - emp) < 3.0 * se);
}

TEST_CASE("noncentral chi-squared matches central chi-squared at nc = 0") {
  for (int dof : {1, 2, 3, 7, 20, 50}) {
    for (double x : {0.1, 1.0, 5.0, 20.0, 80.0}) {
      const double a = noncentral_chisq_cdf(x, dof, 0.0);
      const double b = reg_lower_gamma(0.5 * dof, 0.5 * x);
      CHECK(std::fabs(a - b) <= 1e-9 * std::max(1e-12, b));
    }
  }
}

TEST_CASE("noncentral chi-squared monotone in x and in range for large nc") {
  double prev = 0.0;
  for (int i = 1; i <= 60; ++i) {
    const double x = i * 4.0;
    Tolerances tol;
    tol.max_iter = 5000;
    const double v = noncentral_chisq_cdf(x, 10, 120.0, tol);
    CHECK(v >= prev - 1e-14);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("noncentral chi-squared respects the mixture-term cap") {
  Tolerances tight;
  tight.max_iter = 5;
  CHECK_THROWS_AS(noncentral_chisq_cdf(100.0, 4, 400.0, tight), computation_error);
  try {
    noncentral_chisq_cdf(100.0, 4, 400.0, tight);
  } catch (const computation_error& e) {
    CHECK(e.partial_result >= 0.0);  // partial-sum diagnostic travels with the error
  }
}

TEST_CASE("birge_tail_bound worked examples") {
  const auto b = birge_tail_bound(10, 5.0, 1.0);
  CHECK(b.quantile == Catch::Approx(15.0 - 2.0 * std::sqrt(20.0)).margin(1e-12));
  CHECK(b.bound == Catch::Approx(std::exp(-1.0)).margin(1e-15));
  CHECK(noncentral_chisq_cdf(std::max(0.0, b.quantile), 10, 5.0) <= b.bound);

  const auto tiny_t = birge_tail_bound(7, 2.0, 1e-12);
  CHECK(tiny_t.bound == Catch::Approx(1.0).margin(1e-9));
  CHECK(tiny_t.quantile == Catch::Approx(9.0).margin(1e-4));

  const auto clamped = birge_tail_bound(1, 0.0, 5.0);
  CHECK(clamped.quantile < 0.0);
  CHECK(noncentral_chisq_cdf(0.0, 1, 0.0) <= clamped.bound);

  CHECK_THROWS_AS(birge_tail_bound(1, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(birge_tail_bound(0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("birge bound dominates the exact CDF on a reduced grid") {
  Tolerances tol;
  tol.max_iter = 2000;
  for (int dof : {1, 2, 5, 10, 25, 50}) {
    for (double nc : {0.0, 0.5, 5.0, 12.5, 25.0}) {
      for (double t : {0.1, 0.5, 1.0, 2.5, 10.0}) {
        const auto b = birge_tail_bound(dof, nc, t);
        const double cdf = noncentral_chisq_cdf(std::max(0.0, b.quantile), dof, nc, tol);
        CHECK(cdf <= b.bound + 1e-12);
      }
    }
  }
}

TEST_CASE("gaussian info density moments: closed forms and quadrature") {
  const auto m = gaussian_info_density_moments(1.0, 1.0);
  CHECK(m.mean == Catch::Approx(0.5 * std::log(2.0)).margin(1e-12));
  CHECK(m.variance == Catch::Approx(0.5).margin(1e-12));
  CHECK(std::fabs(m.quad_mean - m.mean) < 1e-8);
  CHECK(std::fabs(m.quad_variance - m.variance) < 1e-8);

  const auto m2 = gaussian_info_density_moments(2.0, 0.5);
  CHECK(m2.variance == Catch::Approx(2.0 / 2.5).margin(1e-12));
  CHECK(std::fabs(m2.quad_variance - m2.variance) < 1e-8);

  CHECK_THROWS_AS(gaussian_info_density_moments(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_info_density_moments(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_info_density_moments(1.0, 1.0, 32), std::domain_error);
}

TEST_CASE("gaussian info density third moment against Monte Carlo") {
  const auto m = gaussian_info_density_moments(1.0, 1.0);
  Rng rng(555123ULL);
  const long samples = 10000000;
  const double a = 1.0 / 4.0, b = 1.0 / 2.0;
  double acc = 0.0, acc2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double x = rng.normal();
    const double z = rng.normal();
    const double y = x + z;
    const double g = a * y * y - b * z * z;  // centered info density
    const double cube = std::fabs(g * g * g);
    acc += cube;
    acc2 += cube * cube;
  }
  const double emp = acc / samples;
  const double var = acc2 / samples - emp * emp;
  const double se = std::sqrt(var / samples);
  CHECK(std::fabs(m.abs_third_central - emp) < 3.0 * se);
}

TEST_CASE("gauss_hermite weight normalization and degree") {
  for (int order : {1, 2, 16, 64, 128}) {
    const auto rule = gauss_hermite(order);
    double wsum = 0.0, second = 0.0;
    for (int i = 0; i < order; ++i) {
      wsum += rule.weights[i];
      second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(wsum == Catch::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-12));
    if (order >= 2) CHECK(second == Catch::Approx(0.5 * std::sqrt(3.14159265358979323846)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gauss_hermite(0), std::domain_error);
  CHECK_THROWS_AS(gauss_hermite(129), std::domain_error);
}

TEST_CASE("tolerances validate") {
  Tolerances t;
  t.abs_tol = -1.0;
  CHECK_THROWS_AS(t.validate(), std::domain_error);
  t = Tolerances{};
  t.max_iter = 0;
  CHECK_THROWS_AS(t.validate(), std::domain_error);
}
