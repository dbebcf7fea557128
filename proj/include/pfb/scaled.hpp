#ifndef PFB_SCALED_HPP
#define PFB_SCALED_HPP

#include <cmath>

namespace pfb {

/// A quantity carried as value * e^{log_scale}.
///
/// Tail norms at admissible truncation orders sit many orders of magnitude
/// below 1 (e.g. e^{-35} at n = 1225, alpha = 1, r = 1/2); the factored form
/// keeps full relative accuracy there.
struct ScaledValue {
  double value = 0.0;
  double log_scale = 0.0;

  /// Unscaled value; may underflow to 0 for deep tails.
  double raw() const { return value * std::exp(log_scale); }
};

}  // namespace pfb

#endif
