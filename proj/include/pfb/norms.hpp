#ifndef PFB_NORMS_HPP
#define PFB_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pfb/errors.hpp"
#include "pfb/kernel.hpp"
#include "pfb/norm_order.hpp"
#include "pfb/quadrature.hpp"
#include "pfb/scaled.hpp"
#include "pfb/specfun.hpp"

namespace pfb {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_refinements = 24;
  std::uint64_t sup_grid = 4096;

  void validate() const {
    if (!(rel_tol > 0.0))
      throw std::domain_error("QuadratureConfig: rel_tol must be > 0");
    if (max_refinements < 1)
      throw std::domain_error("QuadratureConfig: max_refinements must be >= 1");
    if (sup_grid < 64 || (sup_grid & (sup_grid - 1)) != 0)
      throw std::domain_error("QuadratureConfig: sup_grid must be a power of two >= 64");
  }
};

namespace detail {

constexpr std::uint64_t norm_grid_cap = std::uint64_t(1) << 22;

/// Fills exact samples of a 2*pi-periodic function on the 2^k uniform grids.
using GridFill = std::function<void(std::uint64_t, std::vector<double>&)>;

/// Wraps a point-evaluable function as a GridFill, reusing even-index values
/// when the grid doubles.
class FunctionGridFill {
 public:
  explicit FunctionGridFill(std::function<double(double)> f) : f_(std::move(f)) {}

  void operator()(std::uint64_t n_grid, std::vector<double>& out) {
    const double two_pi = 2.0 * pi;
    out.resize(n_grid);
    if (!cache_.empty() && n_grid == 2 * cache_.size()) {
      for (std::uint64_t j = 0; j < cache_.size(); ++j) out[2 * j] = cache_[j];
      for (std::uint64_t j = 1; j < n_grid; j += 2)
        out[j] = f_(two_pi * static_cast<double>(j) / static_cast<double>(n_grid));
    } else {
      for (std::uint64_t j = 0; j < n_grid; ++j)
        out[j] = f_(two_pi * static_cast<double>(j) / static_cast<double>(n_grid));
    }
    cache_ = out;
  }

 private:
  std::function<double(double)> f_;
  std::vector<double> cache_;
};

/// Max deviation of the 12-point interpolant built from `coarse` against the
/// exact values at the odd points of the doubled grid.
inline double interp_validation_error(const std::vector<double>& coarse,
                                      const std::vector<double>& fine) {
  UniformPeriodicInterp ip(&coarse);
  const std::uint64_t n_fine = fine.size();
  const double two_pi = 2.0 * pi;
  const std::uint64_t step = std::max<std::uint64_t>(1, n_fine / 512);
  double err = 0.0;
  for (std::uint64_t j = 1; j < n_fine; j += 2 * step) {
    const double t = two_pi * static_cast<double>(j) / static_cast<double>(n_fine);
    err = std::max(err, std::fabs(ip(t) - fine[j]));
  }
  return err;
}

inline double abs_pow(double v, double s) {
  const double a = std::fabs(v);
  if (s == 1.0) return a;
  if (s == 2.0) return a * a;
  return std::pow(a, s);
}

/// L_s integral of |f|^s over one period at one grid level: plain rectangle
/// rule for even integer s (the integrand is smooth), otherwise panels split
/// at the sign changes of f, each integrated by adaptive Gauss-Legendre on
/// the validated interpolant.
struct LevelIntegral {
  double value = 0.0;
  bool kink_corrected = false;
  bool gl_converged = true;
};

inline LevelIntegral level_integral(const std::vector<double>& f, double sv,
                                    bool even, bool interp_ok, double i_estimate,
                                    double rel_tol) {
  const std::uint64_t n_grid = f.size();
  const double two_pi = 2.0 * pi;
  const double h = two_pi / static_cast<double>(n_grid);

  LevelIntegral out;
  double rect = 0.0;
  for (double v : f) rect += abs_pow(v, sv);
  rect *= h;
  if (even || !interp_ok) {
    out.value = rect;
    out.kink_corrected = even;
    return out;
  }

  // zeros from sign changes of the samples
  std::vector<double> zeros;
  UniformPeriodicInterp ip(&f);
  for (std::uint64_t j = 0; j < n_grid; ++j) {
    const double a = f[j];
    const double b = f[(j + 1) & (n_grid - 1)];
    if ((a < 0.0) != (b < 0.0)) {
      const double ta = h * static_cast<double>(j);
      zeros.push_back(bisect_zero(ip, ta, ta + h, a, 1e-13));
    } else if (a == 0.0) {
      zeros.push_back(h * static_cast<double>(j));
    }
    if (zeros.size() > 60000)
      throw non_convergence_error("ls_norm: too many sign changes to resolve");
  }
  if (zeros.empty()) {
    out.value = rect;
    out.kink_corrected = true;  // |f|^s smooth here: no kink in sight
    return out;
  }

  auto integrand = [&](double t) { return abs_pow(ip(t), sv); };
  const double gap_tol =
      rel_tol * std::max(i_estimate, 1e-300) / (4.0 * static_cast<double>(zeros.size()));
  double total = 0.0;
  bool all_ok = true;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const double a = zeros[i];
    const double b = (i + 1 < zeros.size()) ? zeros[i + 1] : zeros[0] + two_pi;
    bool ok = true;
    total += tanh_sinh(integrand, a, b, gap_tol, &ok);
    all_ok = all_ok && ok;
  }
  out.value = total;
  out.kink_corrected = true;
  out.gl_converged = all_ok;
  return out;
}

/// Core L_s norm engine over exact dyadic-grid samples.
inline double ls_norm_engine(const GridFill& fill, NormOrder s,
                             const QuadratureConfig& cfg, std::uint64_t min_grid) {
  cfg.validate();

  if (s.is_inf()) {
    std::uint64_t n_grid = next_pow2(std::max<std::uint64_t>({min_grid, cfg.sup_grid, 64}));
    std::vector<double> cur, prev;
    fill(n_grid, cur);
    double val = 0.0;
    for (double v : cur) val = std::max(val, std::fabs(v));
    int refined_levels = 0;
    for (int m = 0; m < cfg.max_refinements; ++m) {
      if (2 * n_grid > norm_grid_cap) break;
      prev = std::move(cur);
      n_grid *= 2;
      fill(n_grid, cur);
      const double scale = *std::max_element(cur.begin(), cur.end(),
                                             [](double a, double b) {
                                               return std::fabs(a) < std::fabs(b);
                                             });
      const double vscale = std::fabs(scale);
      if (vscale == 0.0) return 0.0;
      const double eps = interp_validation_error(prev, cur);
      double next = 0.0;
      for (double v : cur) next = std::max(next, std::fabs(v));
      bool refined = false;
      if (eps <= 1e-8 * vscale) {
        // golden refinement around the top 3 grid maxima of |f|
        UniformPeriodicInterp ip(&cur);
        const double h = 2.0 * pi / static_cast<double>(n_grid);
        std::vector<std::pair<double, std::uint64_t>> local;
        for (std::uint64_t j = 0; j < n_grid; ++j) {
          const double v = std::fabs(cur[j]);
          const double vl = std::fabs(cur[(j + n_grid - 1) & (n_grid - 1)]);
          const double vr = std::fabs(cur[(j + 1) & (n_grid - 1)]);
          if (v >= vl && v >= vr) local.emplace_back(v, j);
        }
        std::sort(local.begin(), local.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        auto abs_ip = [&](double t) { return std::fabs(ip(t)); };
        for (std::size_t i = 0; i < local.size() && i < 3; ++i) {
          const double tc = h * static_cast<double>(local[i].second);
          const double tm = golden_max(abs_ip, tc - h, tc + h,
                                       std::max(1e-13, 1e-6 * h));
          next = std::max(next, abs_ip(tm));
        }
        refined = true;
      }
      if (refined && ++refined_levels >= 2 &&
          std::fabs(next - val) <= cfg.rel_tol * std::max(next, 1e-300))
        return next;
      val = next;
    }
    throw non_convergence_error("ls_norm: sup norm did not converge");
  }

  const double sv = s.value();
  const bool even = s.is_even_integer();
  std::uint64_t n_grid = next_pow2(std::max<std::uint64_t>({min_grid, 1024, 64}));
  if (n_grid > norm_grid_cap)
    throw non_convergence_error("ls_norm: required grid exceeds the hard cap");

  std::vector<double> cur, prev;
  fill(n_grid, cur);
  double vscale = 0.0;
  for (double v : cur) vscale = std::max(vscale, std::fabs(v));
  if (vscale == 0.0) return 0.0;

  LevelIntegral li = level_integral(cur, sv, even, false, 0.0, cfg.rel_tol);
  double i_prev = li.value;
  int corrected_levels = li.kink_corrected && li.gl_converged ? 1 : 0;

  for (int m = 0; m < cfg.max_refinements; ++m) {
    if (2 * n_grid > norm_grid_cap) break;
    prev = std::move(cur);
    n_grid *= 2;
    fill(n_grid, cur);
    vscale = 0.0;
    for (double v : cur) vscale = std::max(vscale, std::fabs(v));
    if (vscale == 0.0) return 0.0;
    const double eps = interp_validation_error(prev, cur);
    const bool interp_ok = eps <= 1e-8 * vscale;
    li = level_integral(cur, sv, even, interp_ok, i_prev, cfg.rel_tol);
    if (li.kink_corrected && li.gl_converged) {
      ++corrected_levels;
      if (corrected_levels >= 2 &&
          std::fabs(li.value - i_prev) <= cfg.rel_tol * std::max(li.value, 1e-300))
        return std::pow(li.value, 1.0 / sv);
    } else {
      corrected_levels = 0;
    }
    i_prev = li.value;
  }
  throw non_convergence_error("ls_norm: quadrature did not converge within the refinement budget");
}

}  // namespace detail

/// L_s norm of a smooth 2*pi-periodic function over one period.
inline double periodic_ls_norm(const std::function<double(double)>& f, NormOrder s,
                               const QuadratureConfig& cfg = {},
                               std::uint64_t min_grid = 64) {
  detail::FunctionGridFill fg(f);
  return detail::ls_norm_engine([&fg](std::uint64_t n, std::vector<double>& out) { fg(n, out); },
                                s, cfg, std::max<std::uint64_t>(min_grid, 256));
}

/// L_s norm of the scaled kernel tail Q (fast exact-sample path).
/// Returns (norm of Q, log_scale of the tail).
inline ScaledValue kernel_tail_ls_norm(const KernelTail& kt, NormOrder s,
                                       const QuadratureConfig& cfg = {}) {
  const std::uint64_t n = kt.n();
  const std::uint64_t base = s.is_inf() ? std::max(cfg.sup_grid, 16 * n)
                                        : std::max<std::uint64_t>(1024, 8 * n);
  const std::uint64_t min_grid = detail::next_pow2(base);
  if (min_grid > detail::norm_grid_cap)
    throw non_convergence_error("kernel_tail_ls_norm: truncation order too large for quadrature");
  auto fill = [&kt](std::uint64_t ng, std::vector<double>& out) {
    kt.grid_samples(ng, out, nullptr);
  };
  return {detail::ls_norm_engine(fill, s, cfg, min_grid), kt.log_scale()};
}

/// J_s(v) = || (t^2+1)^{-1/2} ||_{L_s[0, v]}; 1 for s = inf.
inline double j_s(double v, NormOrder s, const QuadratureConfig& cfg = {}) {
  if (!(v > 0.0)) throw std::domain_error("j_s: requires v > 0");
  if (s.is_inf()) return 1.0;
  const double sv = s.value();
  auto integrand = [sv](double t) { return std::pow(t * t + 1.0, -sv / 2.0); };
  // dyadic panels resolve both the unit scale and the algebraic tail
  double total = 0.0;
  double lo = 0.0, hi = std::min(1.0, v);
  for (;;) {
    total += detail::gl15(integrand, lo, hi);
    if (hi >= v) break;
    lo = hi;
    hi = std::min(2.0 * hi, v);
  }
  double refined = 0.0;
  lo = 0.0;
  hi = std::min(1.0, v);
  bool all_ok = true;
  for (;;) {
    bool ok = true;
    refined += detail::adaptive_gl(integrand, lo, hi,
                                   cfg.rel_tol * std::max(total, 1e-300) * 0.1, &ok);
    all_ok = all_ok && ok;
    if (hi >= v) break;
    lo = hi;
    hi = std::min(2.0 * hi, v);
  }
  if (!all_ok)
    throw non_convergence_error("j_s: adaptive quadrature failed to converge");
  return std::pow(refined, 1.0 / sv);
}

/// lim_{v -> inf} J_s(v) = F(1/2, (3-s)/2; 3/2; 1)^{1/s} for s > 1.
inline double j_s_limit(NormOrder s) {
  if (s.is_inf() || !(s.value() > 1.0))
    throw std::domain_error("j_s_limit: requires finite s > 1 (integral diverges at s = 1)");
  const double sv = s.value();
  return std::pow(gauss_2f1({0.5, (3.0 - sv) / 2.0, 1.5, 1.0}), 1.0 / sv);
}

/// Implied Theta coefficient of the truncated-integral expansion
///   J_s(pi n^{1-r}/(alpha r)) = J_s(inf) + Theta/((s-1) v^{s-1}),
/// back-solved from the tail integral; the expansion asserts |Theta| < 2.
inline double tail_integral_residual(double alpha, double r, double s,
                                     std::uint64_t n) {
  if (!(s > 1.0)) throw std::domain_error("tail_integral_residual: requires s > 1");
  if (!(r > 0.0 && r < 1.0))
    throw std::domain_error("tail_integral_residual: requires 0 < r < 1");
  if (n < 1) throw std::domain_error("tail_integral_residual: requires n >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("tail_integral_residual: requires alpha > 0");

  const double v = pi * std::pow(static_cast<double>(n), 1.0 - r) / (alpha * r);
  const double f_lim = gauss_2f1({0.5, (3.0 - s) / 2.0, 1.5, 1.0});  // integral to inf
  const double jlim = std::pow(f_lim, 1.0 / s);

  // T_v = int_v^inf (t^2+1)^{-s/2} dt = v^{1-s}/(s-1) * tau,
  // tau = int_0^1 (1 + p^{2/(s-1)}/v^2)^{-s/2} dp  (smooth, in (0, 1])
  auto tau_integrand = [&](double p) {
    return std::pow(1.0 + std::pow(p, 2.0 / (s - 1.0)) / (v * v), -s / 2.0);
  };
  bool ok = true;
  const double tau = detail::adaptive_gl(tau_integrand, 0.0, 1.0, 1e-13, &ok);
  if (!ok) throw non_convergence_error("tail_integral_residual: quadrature failed");

  const double v_pow = std::pow(v, 1.0 - s);  // may underflow for huge v
  if (v_pow < 1e-280) {
    // exact cancellation of v^{s-1} * v^{1-s} done symbolically
    return -tau * std::pow(jlim, 1.0 - s) / s;
  }
  const double x = v_pow * tau / ((s - 1.0) * f_lim);
  return (s - 1.0) * std::pow(v, s - 1.0) * jlim * std::expm1(std::log1p(-x) / s);
}

}  // namespace pfb

#endif
