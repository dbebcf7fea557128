#ifndef PFB_NORM_ORDER_HPP
#define PFB_NORM_ORDER_HPP

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace pfb {

/// L_s norm exponent, s in [1, inf].  Also reused as the class exponent p.
///
/// The conjugate exponent s' satisfies 1/s + 1/s' = 1, with the usual
/// conventions s' = inf for s = 1 and s' = 1 for s = inf.
class NormOrder {
 public:
  static NormOrder finite(double s) {
    if (!(s >= 1.0) || !std::isfinite(s))
      throw std::domain_error("NormOrder: finite order requires s >= 1");
    return NormOrder(false, s);
  }
  static NormOrder infinity() { return NormOrder(true, 0.0); }

  /// Accepts "inf"/"infinity" or a decimal number >= 1.
  static NormOrder parse(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" ||
        text == "infinity" || text == "oo")
      return infinity();
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size())
      throw std::invalid_argument("NormOrder: cannot parse '" + text + "'");
    return finite(v);
  }

  bool is_inf() const { return inf_; }

  double value() const {
    if (inf_) throw std::domain_error("NormOrder: infinite order has no finite value");
    return s_;
  }

  /// 1/s, with 1/inf = 0.
  double inv() const { return inf_ ? 0.0 : 1.0 / s_; }

  NormOrder conjugate() const {
    if (inf_) return finite(1.0);
    if (s_ == 1.0) return infinity();
    return finite(s_ / (s_ - 1.0));
  }

  bool is_even_integer() const {
    if (inf_) return false;
    double r = std::round(s_);
    return std::fabs(s_ - r) < 1e-9 && std::fmod(r, 2.0) == 0.0;
  }

  std::string str() const {
    if (inf_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", s_);
    return buf;
  }

  friend bool operator==(const NormOrder& a, const NormOrder& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.s_ == b.s_);
  }

 private:
  NormOrder(bool inf, double s) : inf_(inf), s_(s) {}
  bool inf_;
  double s_;
};

}  // namespace pfb

#endif
