#ifndef FBEH_BLAHUT_ARIMOTO_HPP
#define FBEH_BLAHUT_ARIMOTO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fbeh/channel.hpp"
#include "fbeh/rng.hpp"
#include "fbeh/tolerances.hpp"

namespace fbeh {

// Mutual information I(P;W) in nats.
inline double mutual_information(const DmcSpec& ch, const std::vector<double>& input) {
  const std::vector<double> q = ch.output_marginal(input);
  double info = 0.0;
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    if (input[x] <= 0.0) continue;
    for (std::size_t y = 0; y < ch.output_size(); ++y) {
      const double w = ch.w(x, y);
      if (w > 0.0) info += input[x] * w * std::log(w / q[y]);
    }
  }
  return info;
}

// Variance of the information density under P(x) W(y|x), in nats^2.
inline double dispersion(const DmcSpec& ch, const std::vector<double>& input) {
  const std::vector<double> q = ch.output_marginal(input);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    if (input[x] <= 0.0) continue;
    for (std::size_t y = 0; y < ch.output_size(); ++y) {
      const double w = ch.w(x, y);
      if (w <= 0.0) continue;
      const double i_xy = std::log(w / q[y]);
      const double mass = input[x] * w;
      m1 += mass * i_xy;
      m2 += mass * i_xy * i_xy;
    }
  }
  return std::max(0.0, m2 - m1 * m1);
}

struct CapacityCostResult {
  std::vector<double> optimal_input;
  double capacity = 0.0;    // nats
  double multiplier = 0.0;  // Lagrange dual of the cost constraint, nats per energy unit
  bool active = false;      // constraint tight at the optimum
  long iterations = 0;
  std::vector<double> objective_history;  // Lagrangian lower bound per iteration (last solve)
};

namespace detail {

struct LagrangianSolve {
  std::vector<double> input;
  double info = 0.0;  // I(P;W) nats
  double cost = 0.0;  // E_P[cost]
  long iterations = 0;
  std::vector<double> history;
};

// Maximizes I(P;W) - mu*E_P[cost] by alternating maximization, stopping when
// the duality-gap certificate max_x {D(W(.|x)||q) - mu cost(x)} - J(P) < tol.
inline LagrangianSolve ba_lagrangian(const DmcSpec& ch, double mu, double tol, long max_iter,
                                     std::vector<double> p0) {
  const std::size_t nx = ch.input_size(), ny = ch.output_size();
  LagrangianSolve out;
  out.input = std::move(p0);
  std::vector<double> d(nx);
  for (long it = 0; it < max_iter; ++it) {
    const std::vector<double> q = ch.output_marginal(out.input);
    double info = 0.0, cost = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = ch.w(x, y);
        if (w > 0.0) dx += w * std::log(w / q[y]);
      }
      d[x] = dx;
      info += out.input[x] * dx;
      cost += out.input[x] * ch.cost(x);
    }
    out.info = info;
    out.cost = cost;
    out.iterations = it + 1;
    const double lower = info - mu * cost;
    out.history.push_back(lower);
    double upper = -1e300;
    for (std::size_t x = 0; x < nx; ++x) upper = std::max(upper, d[x] - mu * ch.cost(x));
    if (upper - lower < tol) return out;
    // P'(x) proportional to P(x) exp(D_x - mu cost(x)); shift by the max exponent.
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      out.input[x] *= std::exp(d[x] - mu * ch.cost(x) - upper);
      z += out.input[x];
    }
    for (std::size_t x = 0; x < nx; ++x) out.input[x] /= z;
  }
  throw computation_error("blahut_arimoto: iteration cap exceeded", out.info);
}

inline std::vector<double> uniform_input(std::size_t nx) {
  return std::vector<double>(nx, 1.0 / static_cast<double>(nx));
}

}  // namespace detail

// Capacity-cost function: sup { I(P;W) : E_P[cost] <= cost_limit } by inner
// alternating maximization of the Lagrangian and outer bisection on the
// multiplier. cost_limit = 0 restricts the input to the zero-cost symbols.
inline CapacityCostResult blahut_arimoto_constrained(
    const DmcSpec& ch, double cost_limit, double tol = 1e-9,
    std::optional<std::vector<double>> initial = std::nullopt, long max_iter = 200000) {
  if (cost_limit < 0.0) throw std::domain_error("blahut_arimoto_constrained: cost_limit >= 0");
  if (!(tol > 0.0)) throw std::domain_error("blahut_arimoto_constrained: tol > 0");
  const std::size_t nx = ch.input_size();
  std::vector<double> p0 = initial ? *initial : detail::uniform_input(nx);
  if (p0.size() != nx) throw std::domain_error("blahut_arimoto_constrained: bad initial input");

  CapacityCostResult res;

  if (cost_limit == 0.0) {
    // Only zero-cost symbols are usable; solve the restricted unconstrained problem.
    std::vector<std::size_t> free_syms;
    for (std::size_t x = 0; x < nx; ++x)
      if (ch.cost(x) == 0.0) free_syms.push_back(x);
    std::vector<double> wsub;
    wsub.reserve(free_syms.size() * ch.output_size());
    for (std::size_t x : free_syms)
      for (std::size_t y = 0; y < ch.output_size(); ++y) wsub.push_back(ch.w(x, y));
    const DmcSpec sub(free_syms.size(), ch.output_size(), wsub,
                      std::vector<double>(free_syms.size(), 0.0));
    auto solve = detail::ba_lagrangian(sub, 0.0, tol, max_iter,
                                       detail::uniform_input(free_syms.size()));
    res.optimal_input.assign(nx, 0.0);
    for (std::size_t i = 0; i < free_syms.size(); ++i) res.optimal_input[free_syms[i]] = solve.input[i];
    res.capacity = solve.info;
    res.iterations = solve.iterations;
    res.objective_history = std::move(solve.history);
    res.active = true;
    // One-sided difference quotient as a supergradient estimate at a = 0.
    const double h = 1e-4;
    const auto right = detail::ba_lagrangian(ch, 0.0, tol, max_iter, detail::uniform_input(nx));
    if (right.cost <= h) {
      res.multiplier = 0.0;
      res.active = false;
    } else {
      const CapacityCostResult at_h = blahut_arimoto_constrained(ch, h, tol, std::nullopt, max_iter);
      res.multiplier = std::max(0.0, (at_h.capacity - res.capacity) / h);
    }
    return res;
  }

  // Unconstrained solution first: if it already meets the budget the
  // constraint is slack and the multiplier is zero.
  auto free_solve = detail::ba_lagrangian(ch, 0.0, tol, max_iter, p0);
  if (free_solve.cost <= cost_limit + tol) {
    res.optimal_input = std::move(free_solve.input);
    res.capacity = free_solve.info;
    res.multiplier = 0.0;
    res.active = free_solve.cost >= cost_limit - tol;
    res.iterations = free_solve.iterations;
    res.objective_history = std::move(free_solve.history);
    return res;
  }

  // Bisection on mu: E_P[cost] at the Lagrangian optimum decreases in mu.
  double mu_lo = 0.0, mu_hi = 1.0;
  detail::LagrangianSolve hi_solve = detail::ba_lagrangian(ch, mu_hi, tol, max_iter, p0);
  int expand = 0;
  while (hi_solve.cost > cost_limit) {
    mu_lo = mu_hi;
    mu_hi *= 2.0;
    hi_solve = detail::ba_lagrangian(ch, mu_hi, tol, max_iter, hi_solve.input);
    if (++expand > 200)
      throw computation_error("blahut_arimoto_constrained: multiplier bracket failed", mu_hi);
  }
  detail::LagrangianSolve mid_solve = hi_solve;
  double mu = mu_hi;
  for (int it = 0; it < 200; ++it) {
    mu = 0.5 * (mu_lo + mu_hi);
    mid_solve = detail::ba_lagrangian(ch, mu, tol, max_iter, mid_solve.input);
    if (mid_solve.cost > cost_limit)
      mu_lo = mu;
    else
      mu_hi = mu;
    if (std::fabs(mid_solve.cost - cost_limit) < tol || mu_hi - mu_lo < 1e-14 * (1.0 + mu_hi))
      break;
  }
  res.optimal_input = std::move(mid_solve.input);
  res.capacity = mid_solve.info;
  res.multiplier = mu;
  res.active = true;
  res.iterations = mid_solve.iterations;
  res.objective_history = std::move(mid_solve.history);
  return res;
}

// Supergradient of the concave capacity-cost function at a: the converged
// Lagrange multiplier. Cross-checked against finite differences in the tests.
inline double capacity_cost_derivative(const DmcSpec& ch, double a, double tol = 1e-9) {
  if (!(a > 0.0)) throw std::domain_error("capacity_cost_derivative: a must be > 0");
  return blahut_arimoto_constrained(ch, a, tol).multiplier;
}

// Profile of the capacity-achieving input set at a given cost limit, probed by
// restarting the solver from random interior points. If every restart lands on
// the same input the set is treated as a singleton; otherwise the dispersion
// spread over converged iterates is reported and flagged heuristic.
struct CaidProfile {
  double capacity = 0.0;  // nats
  double v_min = 0.0;     // nats^2
  double v_max = 0.0;     // nats^2
  bool unique = true;
  std::vector<double> representative;
};

inline CaidProfile caid_profile(const DmcSpec& ch, double cost_limit, int restarts = 20,
                                std::uint64_t seed = 0x43414944ULL, double tol = 1e-9) {
  if (restarts < 1) throw std::domain_error("caid_profile: restarts >= 1");
  CaidProfile prof;
  std::vector<std::vector<double>> inputs;
  Rng rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::optional<std::vector<double>> p0;
    if (r > 0) {
      std::vector<double> draw(ch.input_size());
      double z = 0.0;
      for (auto& v : draw) {
        v = rng.exponential(1.0) + 1e-9;
        z += v;
      }
      for (auto& v : draw) v /= z;
      p0 = std::move(draw);
    }
    const CapacityCostResult res = blahut_arimoto_constrained(ch, cost_limit, tol, p0);
    if (r == 0) {
      prof.capacity = res.capacity;
      prof.representative = res.optimal_input;
    }
    inputs.push_back(res.optimal_input);
  }
  double spread = 0.0;
  for (const auto& p : inputs)
    for (std::size_t x = 0; x < p.size(); ++x)
      spread = std::max(spread, std::fabs(p[x] - inputs[0][x]));
  prof.unique = spread <= 1e-6;
  if (prof.unique) {
    const double v = dispersion(ch, inputs[0]);
    prof.v_min = prof.v_max = v;
  } else {
    prof.v_min = 1e300;
    prof.v_max = -1e300;
    for (const auto& p : inputs) {
      const double v = dispersion(ch, p);
      prof.v_min = std::min(prof.v_min, v);
      prof.v_max = std::max(prof.v_max, v);
    }
  }
  return prof;
}

}  // namespace fbeh

#endif
