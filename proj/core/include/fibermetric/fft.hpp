// In-place iterative radix-2 FFT (power-of-two lengths only) plus 2-D
// transforms on square row-major arrays.  Deterministic and thread-safe: no
// global plans, fixed summation order, identical results for any worker count.

#pragma once

#include <complex>
#include <vector>

namespace fm {

// forward: X_k = sum_j x_j e^{-2 pi i jk / n};  inverse includes the 1/n factor.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// 2-D transform of an n x n row-major array (rows then columns).
void fft2(std::vector<std::complex<double>>& a, std::size_t n, bool inverse);

}  // namespace fm
