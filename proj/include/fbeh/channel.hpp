#ifndef FBEH_CHANNEL_HPP
#define FBEH_CHANNEL_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbeh {

// AWGN channel specification: Y = x + Z, Z ~ N(0, noise_var).
struct AwgnSpec {
  double noise_var;
  explicit AwgnSpec(double nv) : noise_var(nv) {
    if (!(nv > 0.0)) throw std::domain_error("AwgnSpec: noise_var must be > 0");
  }
};

// Discrete memoryless channel with a per-input-symbol energy function.
// w is row-stochastic (input-major); cost[x] >= 0 and at least one symbol has
// zero cost, so the cost-constrained input set is never empty.
class DmcSpec {
 public:
  DmcSpec(std::size_t input_size, std::size_t output_size, std::vector<double> w,
          std::vector<double> cost)
      : nx_(input_size), ny_(output_size), w_(std::move(w)), cost_(std::move(cost)) {
    if (nx_ < 1 || ny_ < 1) throw std::domain_error("DmcSpec: alphabet sizes must be >= 1");
    if (w_.size() != nx_ * ny_) throw std::domain_error("DmcSpec: matrix size mismatch");
    if (cost_.size() != nx_) throw std::domain_error("DmcSpec: cost vector size mismatch");
    double min_cost = 1e300;
    for (double c : cost_) {
      if (c < 0.0) throw std::domain_error("DmcSpec: costs must be >= 0");
      min_cost = std::min(min_cost, c);
    }
    if (min_cost != 0.0)
      throw std::domain_error("DmcSpec: at least one symbol must have zero cost");
    for (std::size_t x = 0; x < nx_; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < ny_; ++y) {
        const double v = w_[x * ny_ + y];
        if (v < 0.0) throw std::domain_error("DmcSpec: transition probabilities must be >= 0");
        row += v;
      }
      if (std::fabs(row - 1.0) > 1e-12)
        throw std::domain_error("DmcSpec: row " + std::to_string(x) + " does not sum to 1");
    }
  }

  std::size_t input_size() const { return nx_; }
  std::size_t output_size() const { return ny_; }
  double w(std::size_t x, std::size_t y) const { return w_[x * ny_ + y]; }
  double cost(std::size_t x) const { return cost_[x]; }
  const std::vector<double>& transition_matrix() const { return w_; }
  const std::vector<double>& cost_vector() const { return cost_; }

  // Output marginal q = P W for an input distribution.
  std::vector<double> output_marginal(const std::vector<double>& input) const {
    if (input.size() != nx_) throw std::domain_error("DmcSpec: input distribution size mismatch");
    std::vector<double> q(ny_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t y = 0; y < ny_; ++y) q[y] += input[x] * w(x, y);
    return q;
  }

 private:
  std::size_t nx_, ny_;
  std::vector<double> w_;
  std::vector<double> cost_;
};

}  // namespace fbeh

#endif
