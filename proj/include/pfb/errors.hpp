#ifndef PFB_ERRORS_HPP
#define PFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pfb {

/// Raised when an iterative scheme exhausts its refinement budget, or when a
/// requested quantity cannot be resolved at the configured tolerances.
class non_convergence_error : public std::runtime_error {
 public:
  explicit non_convergence_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pfb

#endif
