#ifndef PFB_KERNEL_HPP
#define PFB_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pfb/errors.hpp"
#include "pfb/fft.hpp"
#include "pfb/scaled.hpp"
#include "pfb/specfun.hpp"

namespace pfb {

/// Parameters (alpha, r, beta) of the generalized Poisson kernel
/// sum_{k>=1} e^{-alpha k^r} cos(kt - beta*pi/2).
struct KernelParams {
  double alpha = 1.0;
  double r = 0.5;
  double beta = 0.0;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw std::domain_error("KernelParams: alpha must be > 0");
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::domain_error("KernelParams: r must be > 0");
    if (!std::isfinite(beta))
      throw std::domain_error("KernelParams: beta must be finite");
  }
};

namespace detail {

inline double pow_r(double x, double r) {
  if (r == 1.0) return x;
  if (r == 0.5) return std::sqrt(x);
  if (r == 0.25) return std::sqrt(std::sqrt(x));
  if (r == 0.75) {
    const double s = std::sqrt(x);
    return s * std::sqrt(s);
  }
  if (r == 2.0) return x * x;
  return std::exp(r * std::log(x));
}

/// Terms g(tau) = tau^d * e^{-c (tau^r - A)} of weighted kernel-tail sums.
/// d = 0 gives plain tails, d = 1 the k-weighted tails used for derivative
/// sampling.  Everything is carried relative to the anchor A (= n^r or a
/// multiple), so values stay O(1) at the start of the tail.
struct TailTerm {
  double c;
  double r;
  double anchor;  // subtracted inside the exponent
  int d;

  double log_term(double tau) const {
    return static_cast<double>(d) * std::log(tau) - c * (pow_r(tau, r) - anchor);
  }
  double term(double tau) const { return std::exp(log_term(tau)); }

  /// h(tau) = c tau^r - d ln(tau); i-th derivative, i >= 1.
  double h_deriv(int i, double tau) const {
    double ff = 1.0;
    for (int l = 0; l < i; ++l) ff *= (r - l);
    double v = c * ff * pow_r(tau, r) / std::pow(tau, i);
    if (d != 0) {
      double lf = 1.0;  // (ln tau)^{(i)} = (-1)^{i-1} (i-1)! tau^{-i}
      for (int l = 1; l < i; ++l) lf *= l;
      const double sgn = (i % 2 == 1) ? 1.0 : -1.0;
      v -= static_cast<double>(d) * sgn * lf / std::pow(tau, i);
    }
    return v;
  }

  /// Peak of g; g is decreasing for tau beyond this.
  double peak() const {
    if (d == 0) return 0.0;
    return std::pow(static_cast<double>(d) / (c * r), 1.0 / r);
  }

  /// Upper bound for sum_{k > K, step L} g(k) <= (1/L) * int_K^inf g,
  /// valid once g is decreasing.  Scaled consistently with term().
  double integral_from(double k, double stride) const {
    const double a = (d + 1.0) / r;
    const double x = c * pow_r(k, r);
    const double scaled = upper_gamma_scaled(a, x);  // e^x Gamma(a,x)
    // (1/r) c^{-a} e^{-c(k^r - A)} k^{-d} * scaled ... all in anchored units
    return std::exp(-c * (pow_r(k, r) - anchor) + std::log(scaled) -
                    a * std::log(c)) /
           (r * stride);
  }
};

/// Euler-Maclaurin completion of sum_{j>=0} g(k0 + j L) from the point where
/// the correction series is safely convergent.
inline bool em_tail_valid(const TailTerm& f, double k0, double stride) {
  if (f.r > 1.0) return false;
  if (f.r == 1.0) return true;  // closed form available
  if (9.0 * stride > 0.25 * k0) return false;
  return std::fabs(f.h_deriv(1, k0)) * stride <= 0.25;
}

inline double em_tail(const TailTerm& f, double k0, double stride) {
  if (f.r == 1.0) {
    // geometric: q = e^{-cL}
    const double q = std::exp(-f.c * stride);
    const double one_minus_q = -std::expm1(-f.c * stride);
    const double head = std::exp(-f.c * (k0 - f.anchor));
    if (f.d == 0) return head / one_minus_q;
    return head * (k0 / one_minus_q + stride * q / (one_minus_q * one_minus_q));
  }
  const double g0 = f.term(k0);
  // complete Bell polynomials: g^{(m)} = g * Y_m(x_1..x_m), x_i = -h^{(i)}
  double x[8];
  for (int i = 1; i <= 7; ++i) x[i] = -f.h_deriv(i, k0);
  double Y[8];
  Y[0] = 1.0;
  for (int m = 0; m < 7; ++m) {
    double acc = 0.0;
    double binom = 1.0;  // C(m, i)
    for (int i = 0; i <= m; ++i) {
      acc += binom * Y[m - i] * x[i + 1];
      binom = binom * (m - i) / (i + 1.0);
    }
    Y[m + 1] = acc;
  }
  const double L = stride;
  double s = f.integral_from(k0, stride) + 0.5 * g0;
  s -= (1.0 / 12.0) * L * g0 * Y[1];
  s += (1.0 / 720.0) * L * L * L * g0 * Y[3];
  s -= (1.0 / 30240.0) * std::pow(L, 5) * g0 * Y[5];
  s += (1.0 / 1209600.0) * std::pow(L, 7) * g0 * Y[7];
  return s;
}

/// sum over k = start, start+stride, ... of k^d e^{-c(k^r - anchor)}.
/// Direct summation with an integral-comparison stop, switching to the
/// Euler-Maclaurin completion as soon as it is valid.
inline double weighted_tail_sum(double c, double r, double anchor,
                                double start, double stride, int d) {
  if (!(c > 0.0)) throw std::domain_error("weighted_tail_sum: requires c > 0");
  const TailTerm f{c, r, anchor, d};
  const double peak = f.peak();

  double sum = 0.0, comp = 0.0;  // Kahan
  double k = start;
  std::uint64_t iter = 0;
  for (;;) {
    if (em_tail_valid(f, k, stride)) {
      const double t = em_tail(f, k, stride);
      const double y = t - comp;
      return sum + y;
    }
    const double t = f.term(k);
    const double y = t - comp;
    const double snew = sum + y;
    comp = (snew - sum) - y;
    sum = snew;
    k += stride;
    ++iter;
    if ((iter & 63u) == 0 || t <= 1e-18 * sum) {
      if (k > peak + stride && t <= 1e-18 * sum &&
          f.integral_from(k, stride) <= 1e-18 * sum)
        return sum;
    }
    if (iter > (1ull << 34))
      throw non_convergence_error("weighted_tail_sum: no convergence");
  }
}

}  // namespace detail

/// sum_{k=n}^inf e^{-weight*alpha*k^r}, returned in factored form
/// (scaled_value, log_scale) with scaled_value = e^{weight*alpha*n^r} * sum.
inline ScaledValue tail_sum(const KernelParams& p, std::uint64_t n, double weight) {
  p.validate();
  if (n < 1) throw std::domain_error("tail_sum: requires n >= 1");
  if (!(weight > 0.0)) throw std::domain_error("tail_sum: requires weight > 0");
  const double c = weight * p.alpha;
  const double anchor = detail::pow_r(static_cast<double>(n), p.r);
  ScaledValue out;
  out.value = detail::weighted_tail_sum(c, p.r, anchor, static_cast<double>(n), 1.0, 0);
  out.log_scale = -c * anchor;
  return out;
}

/// Abel-summed closed form of the full r = 1 kernel with q = e^{-alpha}:
/// sum_{k>=1} q^k cos(kt - beta*pi/2).
inline double poisson_closed_form(double q, double beta, double t) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("poisson_closed_form: requires 0 < q < 1");
  const double th = beta * pi / 2.0;
  const double denom = 1.0 - 2.0 * q * std::cos(t) + q * q;
  return (q * std::cos(t - th) - q * q * std::cos(th)) / denom;
}

/// Truncated kernel tail P^{(n)}(t) = sum_{k>=n} e^{-alpha k^r} cos(kt - beta*pi/2),
/// carried as e^{-alpha n^r} * Q(t).  Provides exact uniform-grid samples of Q
/// (coefficients binned modulo the grid size, then one FFT) and direct point
/// evaluation over the cached coefficient window.
class KernelTail {
 public:
  static constexpr std::uint64_t cache_cap = std::uint64_t(1) << 22;

  KernelTail(const KernelParams& p, std::uint64_t n) : p_(p), n_(n) {
    p_.validate();
    if (n < 1) throw std::domain_error("KernelTail: requires n >= 1");
    n_pow_r_ = detail::pow_r(static_cast<double>(n), p_.r);
    theta_ = p_.beta * pi / 2.0;
    coeff_sum_ = detail::weighted_tail_sum(p_.alpha, p_.r, n_pow_r_,
                                           static_cast<double>(n), 1.0, 0);
  }

  const KernelParams& params() const { return p_; }
  std::uint64_t n() const { return n_; }
  double log_scale() const { return -p_.alpha * n_pow_r_; }
  double phase() const { return theta_; }

  /// Scaled coefficient c_k = e^{-alpha(k^r - n^r)}; c_n = 1.
  double coeff(std::uint64_t k) const {
    return std::exp(-p_.alpha * (detail::pow_r(static_cast<double>(k), p_.r) - n_pow_r_));
  }

  /// sum of scaled coefficients (= e^{alpha n^r} sum e^{-alpha k^r}).
  double coeff_sum() const { return coeff_sum_; }

  /// sum of squared scaled coefficients (Parseval: ||Q||_2^2 = pi * this).
  double coeff_sq_sum() const {
    return detail::weighted_tail_sum(2.0 * p_.alpha, p_.r, 2.0 * n_pow_r_,
                                     static_cast<double>(n_), 1.0, 0);
  }

  /// sum of scaled coefficients from index k on.
  double tail_mass_from(std::uint64_t k) const {
    if (k <= n_) return coeff_sum_;
    return detail::weighted_tail_sum(p_.alpha, p_.r, n_pow_r_,
                                     static_cast<double>(k), 1.0, 0);
  }

  /// Samples of Q (and optionally Q') on the uniform grid t_j = 2*pi*j/N.
  /// Values are exact up to roundoff for any N: wrapped frequencies alias
  /// onto grid points without error, and the per-residue tails are completed
  /// analytically.
  void grid_samples(std::uint64_t n_grid, std::vector<double>& q,
                    std::vector<double>* dq) const {
    std::vector<double> bins, dbins;
    build_bins(n_grid, 0, bins);
    if (dq) build_bins(n_grid, 1, dbins);

    std::vector<std::complex<double>> work(n_grid);
    for (std::uint64_t m = 0; m < n_grid; ++m) work[m] = bins[m];
    fft_pow2(work, +1);
    const double cth = std::cos(theta_), sth = std::sin(theta_);
    q.resize(n_grid);
    for (std::uint64_t j = 0; j < n_grid; ++j)
      q[j] = cth * work[j].real() + sth * work[j].imag();

    if (dq) {
      for (std::uint64_t m = 0; m < n_grid; ++m) work[m] = dbins[m];
      fft_pow2(work, +1);
      dq->resize(n_grid);
      // Q'(t) = Re(i e^{-i theta} sum k c_k e^{ikt}) = -Im(e^{-i theta} G')
      for (std::uint64_t j = 0; j < n_grid; ++j)
        (*dq)[j] = -(cth * work[j].imag() - sth * work[j].real());
    }
  }

  /// Samples of D_h(t) = Q(t) - Q(t+h) on the uniform grid, from the twisted
  /// coefficients c_k (1 - e^{ikh}).  Uses the cached coefficient window;
  /// requires the window to carry essentially all coefficient mass.
  void grid_samples_shift_diff(std::uint64_t n_grid, double h,
                               std::vector<double>& q,
                               std::vector<double>* dq) const {
    require_offgrid_exact();
    const std::vector<double>& c = cached_coeffs();
    std::vector<std::complex<double>> bins(n_grid, 0.0), dbins;
    if (dq) dbins.assign(n_grid, 0.0);
    const std::complex<double> rot_step = std::polar(1.0, h);
    std::complex<double> rot = std::polar(1.0, std::fmod(static_cast<double>(n_) * h, 2.0 * pi));
    const std::uint64_t mask = n_grid - 1;
    std::uint64_t m = n_ & mask;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::complex<double> w = c[i] * (1.0 - rot);
      bins[m] += w;
      if (dq) dbins[m] += static_cast<double>(n_ + i) * w;
      rot *= rot_step;
      if ((i & 1023u) == 1023u)
        rot = std::polar(1.0, std::fmod(static_cast<double>(n_ + i + 1) * h, 2.0 * pi));
      m = (m + 1) & mask;
    }
    fft_pow2(bins, +1);
    const double cth = std::cos(theta_), sth = std::sin(theta_);
    q.resize(n_grid);
    for (std::uint64_t j = 0; j < n_grid; ++j)
      q[j] = cth * bins[j].real() + sth * bins[j].imag();
    if (dq) {
      fft_pow2(dbins, +1);
      dq->resize(n_grid);
      for (std::uint64_t j = 0; j < n_grid; ++j)
        (*dq)[j] = -(cth * dbins[j].imag() - sth * dbins[j].real());
    }
  }

  /// Direct point evaluation of Q (scaled) over the cached window.
  double point(double t) const {
    require_offgrid_exact();
    t -= 2.0 * pi * std::floor(t / (2.0 * pi));  // exact periodicity
    const std::vector<double>& c = cached_coeffs();
    const std::complex<double> z = std::polar(1.0, t);
    std::complex<double> acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    const std::complex<double> zn =
        std::polar(1.0, std::fmod(static_cast<double>(n_) * t, 2.0 * pi));
    const std::complex<double> g = acc * zn;
    return std::cos(theta_) * g.real() + std::sin(theta_) * g.imag();
  }

  /// Coefficient window [n, n + size); complete when all mass above the
  /// window is below the truncation tolerance.
  const std::vector<double>& cached_coeffs() const {
    if (cache_.empty()) build_cache();
    return cache_;
  }
  bool cache_complete() const {
    if (cache_.empty()) build_cache();
    return cache_complete_;
  }
  double cache_tail_mass() const {
    if (cache_.empty()) build_cache();
    return cache_tail_mass_;
  }

  bool offgrid_exact_ok() const {
    if (cache_.empty()) build_cache();
    return cache_complete_ ||
           cache_tail_mass_ <= 1e-13 * std::max(1.0, coeff_sum_);
  }

 private:
  void require_offgrid_exact() const {
    if (!offgrid_exact_ok())
      throw non_convergence_error(
          "KernelTail: coefficient mass beyond the cached window is too large "
          "for direct evaluation (unresolvable tail)");
  }

  void build_cache() const {
    cache_.reserve(1024);
    double total = 0.0;
    std::uint64_t k = n_;
    const detail::TailTerm f{p_.alpha, p_.r, n_pow_r_, 0};
    cache_complete_ = false;
    for (;;) {
      if (cache_.size() >= cache_cap) break;
      const double t = coeff(k);
      cache_.push_back(t);
      total += t;
      ++k;
      if (t <= 1e-18 * total &&
          f.integral_from(static_cast<double>(k), 1.0) <= 1e-18 * total) {
        cache_complete_ = true;
        break;
      }
    }
    cache_tail_mass_ = cache_complete_ ? 0.0 : tail_mass_from(k);
  }

  // Residue-class sums of k^d c_k modulo n_grid: direct over the head of the
  // tail, then per-residue analytic completion once the strided
  // Euler-Maclaurin form is valid (or immediately, for r = 1).
  void build_bins(std::uint64_t n_grid, int d, std::vector<double>& bins) const {
    if (n_grid == 0 || (n_grid & (n_grid - 1)) != 0)
      throw std::invalid_argument("KernelTail: grid size must be a power of two");
    bins.assign(n_grid, 0.0);
    const double c = p_.alpha;
    const detail::TailTerm f{c, p_.r, n_pow_r_, d};
    double k_em = static_cast<double>(n_);
    if (p_.r < 1.0) {
      const double by_h = std::pow(4.0 * c * p_.r * static_cast<double>(n_grid),
                                   1.0 / (1.0 - p_.r));
      k_em = std::max({k_em, 36.0 * static_cast<double>(n_grid), by_h});
    } else if (p_.r > 1.0) {
      k_em = std::numeric_limits<double>::infinity();  // direct only
    }

    const std::uint64_t mask = n_grid - 1;
    double total = 0.0;
    std::uint64_t k = n_;
    bool completed = false;
    for (;;) {
      if (static_cast<double>(k) >= k_em &&
          em_tail_valid(f, static_cast<double>(k), static_cast<double>(n_grid))) {
        for (std::uint64_t m = 0; m < n_grid; ++m) {
          const std::uint64_t km = k + ((m + n_grid - (k & mask)) & mask);
          bins[km & mask] += detail::em_tail(f, static_cast<double>(km),
                                             static_cast<double>(n_grid));
        }
        completed = true;
        break;
      }
      const double t =
          (d == 0) ? coeff(k) : static_cast<double>(k) * coeff(k);
      bins[k & mask] += t;
      total += t;
      ++k;
      if (static_cast<double>(k) > f.peak() && t <= 1e-18 * std::max(total, 1e-300) &&
          f.integral_from(static_cast<double>(k), 1.0) <= 1e-18 * total)
        break;
      if (k - n_ > (std::uint64_t(1) << 34))
        throw non_convergence_error("KernelTail: bin construction stalled");
    }
    (void)completed;
  }

  KernelParams p_;
  std::uint64_t n_;
  double n_pow_r_ = 0.0;
  double theta_ = 0.0;
  double coeff_sum_ = 0.0;
  mutable std::vector<double> cache_;
  mutable bool cache_complete_ = false;
  mutable double cache_tail_mass_ = 0.0;
};

/// P^{(n)}(t) in factored form e^{-alpha n^r} * Q(t); returns (Q(t), -alpha n^r).
inline ScaledValue kernel_tail_eval(const KernelParams& p, std::uint64_t n, double t) {
  KernelTail kt(p, n);
  return {kt.point(t), kt.log_scale()};
}

}  // namespace pfb

#endif
