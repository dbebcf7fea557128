#ifndef PFB_FFT_HPP
#define PFB_FFT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pfb {

/// In-place radix-2 FFT on a power-of-two length.
/// sign = -1 computes sum_k a_k e^{-2*pi*i*jk/N}, sign = +1 the conjugate
/// kernel (no 1/N factor is applied either way).
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Half-length twiddle table, filled by direct evaluation so roundoff does
  // not accumulate across stages.
  static thread_local std::vector<std::complex<double>> tw;
  static thread_local std::size_t tw_n = 0;
  static thread_local int tw_sign = 0;
  if (tw_n != n || tw_sign != sign) {
    tw.resize(n / 2);
    const double ang = sign * 2.0 * 3.14159265358979323846264338327950288 /
                       static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
      tw[k] = std::complex<double>(std::cos(ang * k), std::sin(ang * k));
    tw_n = n;
    tw_sign = sign;
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * tw[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace pfb

#endif
