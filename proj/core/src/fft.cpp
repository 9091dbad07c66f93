#include "fibermetric/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "fibermetric/grid.hpp"

namespace fm {

namespace {

// Forward-direction twiddle factors w[k] = exp(-2*pi*i*k/n), k < n/2.
// Cached per length; thread_local so worker threads never contend.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<std::complex<double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> w(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * kPi * double(k) / double(n);
    w[k] = {std::cos(ang), std::sin(ang)};
  }
  return cache.emplace(n, std::move(w)).first->second;
}

}  // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  if (n == 1) return;
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = tw[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / double(n);
    for (auto& x : a) x *= inv;
  }
}

void fft2(std::vector<std::complex<double>>& a, std::size_t n, bool inverse) {
  if (a.size() != n * n) throw std::invalid_argument("fft2: size mismatch");
  std::vector<std::complex<double>> buf(n);
  // rows
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) buf[c] = a[r * n + c];
    fft(buf, inverse);
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = buf[c];
  }
  // columns
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) buf[r] = a[r * n + c];
    fft(buf, inverse);
    for (std::size_t r = 0; r < n; ++r) a[r * n + c] = buf[r];
  }
}

}  // namespace fm
