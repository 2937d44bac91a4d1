#pragma once

#include <array>
#include <complex>

namespace semimax::fft {

/// Unnormalized c2c transform over a row-major block of the given shape
/// (axis 0 slowest).  sign = -1 is the forward transform
/// sum_j x_j e^{-2 pi i j n / N}, sign = +1 the unnormalized inverse.
/// In place; any shape (not just powers of two).  Thread safe.
void transform(std::complex<double>* data, const std::array<int, 3>& shape,
               int sign);

/// Signed frequency index of FFT bin n for length N: n <= N/2 ? n : n - N.
inline int signed_index(int n, int length) {
  return (n <= length / 2) ? n : n - length;
}

/// FFT bin of a signed frequency index.
inline int bin_of_signed(int s, int length) { return (s + length) % length; }

}  // namespace semimax::fft
