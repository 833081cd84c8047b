#pragma once

#include <complex>

#include <Eigen/Core>

namespace tamedheat {

using ArrayXcd = Eigen::ArrayXcd;

/// Forward discrete Fourier transform, F_k = sum_j f_j exp(-2*pi*i*j*k/N).
/// Radix-2 when N is a power of two (all grid presets), direct O(N^2)
/// otherwise.
ArrayXcd dft(const ArrayXcd& input);

/// Inverse transform including the 1/N normalization.
ArrayXcd idft(const ArrayXcd& input);

/// x^p for integer p >= 0, exact sign handling for negative bases.
inline double ipow(double x, long long p) {
  double result = 1.0;
  double base = x;
  while (p > 0) {
    if (p & 1) result *= base;
    base *= base;
    p >>= 1;
  }
  return result;
}

}  // namespace tamedheat
