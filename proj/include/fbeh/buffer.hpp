#ifndef FBEH_BUFFER_HPP
#define FBEH_BUFFER_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fbeh {

// Energy-buffer trajectory under harvest-use-store:
//   B_0 = 0,  B_i = (B_{i-1} + E_i - X_i^2)^+.
// outage_index is the first slot i (1-based) whose cumulative demand exceeds
// the cumulative harvest, i.e. the feasibility constraint fails; absent if the
// whole trace is feasible.
struct BufferTrace {
  std::vector<double> levels;  // B_0 .. B_n
  std::optional<std::size_t> outage_index;
};

inline BufferTrace buffer_evolve(std::span<const double> energies,
                                 std::span<const double> consumptions) {
  if (energies.size() != consumptions.size())
    throw std::domain_error("buffer_evolve: sequences must have equal length");
  BufferTrace trace;
  trace.levels.reserve(energies.size() + 1);
  trace.levels.push_back(0.0);
  double cum_harvest = 0.0, cum_demand = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double e = energies[i], c = consumptions[i];
    if (e < 0.0) throw std::domain_error("buffer_evolve: negative energy arrival");
    if (c < 0.0) throw std::domain_error("buffer_evolve: negative consumption");
    const double next = trace.levels.back() + e - c;
    trace.levels.push_back(next > 0.0 ? next : 0.0);
    cum_harvest += e;
    cum_demand += c;
    if (!trace.outage_index && cum_demand > cum_harvest) trace.outage_index = i + 1;
  }
  return trace;
}

}  // namespace fbeh

#endif
