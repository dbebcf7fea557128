#ifndef PFB_QUADRATURE_HPP
#define PFB_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pfb/errors.hpp"

namespace pfb {
namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 4> gl7_x = {
    0.0, 0.405845151377397167, 0.741531185599394440, 0.949107912342758525};
inline constexpr std::array<double, 4> gl7_w = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

inline constexpr std::array<double, 8> gl15_x = {
    0.0,
    0.201194093997434522,
    0.394151347077563370,
    0.570972172608538848,
    0.724417731360170047,
    0.848206583410427216,
    0.937273392400705904,
    0.987992518020485428};
inline constexpr std::array<double, 8> gl15_w = {
    0.202578241925561273, 0.198431485327111576, 0.186161000015562211,
    0.166269205816993934, 0.139570677926154314, 0.107159220467171935,
    0.070366047488108125,  0.030753241996117268};

template <typename F>
double gl7(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = gl7_w[0] * f(c);
  for (int i = 1; i < 4; ++i)
    s += gl7_w[i] * (f(c - h * gl7_x[i]) + f(c + h * gl7_x[i]));
  return s * h;
}

template <typename F>
double gl15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = gl15_w[0] * f(c);
  for (int i = 1; i < 8; ++i)
    s += gl15_w[i] * (f(c - h * gl15_x[i]) + f(c + h * gl15_x[i]));
  return s * h;
}

template <typename F>
double adaptive_gl_rec(const F& f, double a, double b, double abs_tol,
                       int depth, bool* ok) {
  const double i15 = gl15(f, a, b);
  const double i7 = gl7(f, a, b);
  const double err = std::fabs(i15 - i7);
  if (err <= abs_tol || err <= 1e-15 * std::fabs(i15)) return i15;
  if (depth >= 16) {
    if (ok) *ok = false;
    return i15;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gl_rec(f, a, mid, 0.5 * abs_tol, depth + 1, ok) +
         adaptive_gl_rec(f, mid, b, 0.5 * abs_tol, depth + 1, ok);
}

/// Adaptive Gauss-Legendre with absolute tolerance; sets *ok = false if the
/// recursion depth cap was hit anywhere.
template <typename F>
double adaptive_gl(const F& f, double a, double b, double abs_tol,
                   bool* ok = nullptr) {
  if (ok) *ok = true;
  if (a == b) return 0.0;
  return adaptive_gl_rec(f, a, b, abs_tol, 0, ok);
}

/// tanh-sinh (double-exponential) quadrature on [a, b].  Converges at a
/// doubly-exponential rate even with algebraic endpoint singularities, which
/// is exactly what |f|^s panels split at zeros of f look like for
/// non-integer s.
template <typename F>
double tanh_sinh(const F& f, double a, double b, double abs_tol,
                 bool* ok = nullptr) {
  if (ok) *ok = true;
  if (a == b) return 0.0;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double u_max = 4.0;
  const double half_pi = 1.57079632679489661923;

  auto node_sum = [&](double h, bool odd_only) {
    double acc = 0.0;
    const std::int64_t j_end = static_cast<std::int64_t>(u_max / h);
    const std::int64_t j0 = odd_only ? 1 : 0;
    const std::int64_t step = odd_only ? 2 : 1;
    for (std::int64_t j = j0; j <= j_end; j += step) {
      const double u = h * static_cast<double>(j);
      const double sh = half_pi * std::sinh(u);
      const double ch = std::cosh(sh);
      const double w = half_pi * std::cosh(u) / (ch * ch);
      const double x = half * std::tanh(sh);
      double v = w * (f(mid + x) + (j == 0 ? 0.0 : f(mid - x)));
      acc += v;
      if (j > 4 && std::fabs(v) < 1e-18 * std::fabs(acc)) break;
    }
    return acc;
  };

  double h = 0.5;
  double sum = node_sum(h, false);
  double prev = half * h * sum;
  for (int level = 0; level < 9; ++level) {
    h *= 0.5;
    sum += node_sum(h, true);
    const double cur = half * h * sum;
    if (std::fabs(cur - prev) <= std::max(abs_tol, 1e-15 * std::fabs(cur)) &&
        level >= 1)
      return cur;
    prev = cur;
  }
  if (ok) *ok = false;
  return prev;
}

/// Golden-section maximizer on [a, b]; returns the abscissa.
template <typename F>
double golden_max(const F& f, double a, double b, double x_tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section minimizer on [a, b]; returns the abscissa.
template <typename F>
double golden_min(const F& f, double a, double b, double x_tol) {
  return golden_max([&](double x) { return -f(x); }, a, b, x_tol);
}

inline std::uint64_t next_pow2(std::uint64_t x) {
  std::uint64_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

/// 12-point Lagrange interpolation on a uniform 2*pi-periodic sample grid.
/// Barycentric form with the (-1)^i C(11, i) weights of equispaced nodes.
class UniformPeriodicInterp {
 public:
  explicit UniformPeriodicInterp(const std::vector<double>* samples = nullptr)
      : s_(samples) {}

  double operator()(double t) const {
    const std::vector<double>& f = *s_;
    const std::size_t n = f.size();
    const double two_pi = 2.0 * 3.14159265358979323846264338327950288;
    double x = t / (two_pi / static_cast<double>(n));
    x -= std::floor(x / static_cast<double>(n)) * static_cast<double>(n);
    const auto j0 = static_cast<std::int64_t>(std::floor(x));
    const double frac = x - static_cast<double>(j0);
    static constexpr double w[12] = {-1.0,  11.0,  -55.0, 165.0, -330.0, 462.0,
                                     -462.0, 330.0, -165.0, 55.0,  -11.0,  1.0};
    // nodes j0-5 .. j0+6; local coordinate u = frac + 5 in [5, 6)
    const double u = frac + 5.0;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double d = u - static_cast<double>(i);
      std::int64_t idx = j0 - 5 + i;
      idx %= static_cast<std::int64_t>(n);
      if (idx < 0) idx += static_cast<std::int64_t>(n);
      if (std::fabs(d) < 1e-12) return f[static_cast<std::size_t>(idx)];
      const double q = w[i] / d;
      num += q * f[static_cast<std::size_t>(idx)];
      den += q;
    }
    return num / den;
  }

  const std::vector<double>* samples() const { return s_; }

 private:
  const std::vector<double>* s_;
};

/// Bisection refinement of a bracketed sign change of f; |f| need not be
/// small at the result, only the bracket width is driven to x_tol.
template <typename F>
double bisect_zero(const F& f, double a, double b, double fa, double x_tol) {
  for (int i = 0; i < 80 && b - a > x_tol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail
}  // namespace pfb

#endif
