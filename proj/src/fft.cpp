#include "tamedheat/fft.hpp"

#include <cmath>
#include <numbers>

namespace tamedheat {

namespace {

bool is_pow2(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(ArrayXcd& a, bool inverse) {
  const Eigen::Index n = a.size();
  // bit-reversal permutation
  for (Eigen::Index i = 1, j = 0; i < n; ++i) {
    Eigen::Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (Eigen::Index i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (Eigen::Index k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

ArrayXcd dft_direct(const ArrayXcd& input, bool inverse) {
  const Eigen::Index n = input.size();
  ArrayXcd out(n);
  const double sign = inverse ? 2.0 : -2.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ang = sign * std::numbers::pi * static_cast<double>(j) *
                         static_cast<double>(k) / static_cast<double>(n);
      acc += input[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

ArrayXcd dft(const ArrayXcd& input) {
  if (is_pow2(input.size())) {
    ArrayXcd a = input;
    fft_radix2(a, false);
    return a;
  }
  return dft_direct(input, false);
}

ArrayXcd idft(const ArrayXcd& input) {
  ArrayXcd a;
  if (is_pow2(input.size())) {
    a = input;
    fft_radix2(a, true);
  } else {
    a = dft_direct(input, true);
  }
  a /= static_cast<double>(input.size());
  return a;
}

}  // namespace tamedheat
