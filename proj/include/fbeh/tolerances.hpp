#ifndef FBEH_TOLERANCES_HPP
#define FBEH_TOLERANCES_HPP

#include <stdexcept>
#include <string>

namespace fbeh {

// Shared numeric controls for series evaluation and iterative solvers.
struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_iter = 200;

  void validate() const {
    if (!(abs_tol > 0)) throw std::domain_error("Tolerances: abs_tol must be > 0");
    if (!(rel_tol > 0)) throw std::domain_error("Tolerances: rel_tol must be > 0");
    if (max_iter < 1) throw std::domain_error("Tolerances: max_iter must be >= 1");
  }
};

// Thrown when an iterative scheme fails to converge; carries a diagnostic
// (e.g. the partial sum reached) so callers can report something useful.
class computation_error : public std::runtime_error {
 public:
  computation_error(const std::string& what, double partial = 0.0)
      : std::runtime_error(what), partial_result(partial) {}
  double partial_result;
};

}  // namespace fbeh

#endif
