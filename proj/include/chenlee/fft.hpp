#pragma once

#include <complex>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "chenlee/errors.hpp"

namespace chenlee::detail {

using cdouble = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Twiddle factors e^{-2*pi*i*j/n}, j < n/2, cached per transform size.
inline const std::vector<cdouble>& fft_twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<cdouble>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cdouble> w(n / 2);
  const double step = -2.0 * 3.141592653589793238462643383279502884 / double(n);
  for (std::size_t j = 0; j < n / 2; ++j) w[j] = std::polar(1.0, step * double(j));
  return cache.emplace(n, std::move(w)).first->second;
}

// In-place iterative radix-2 transform. Forward uses e^{-2*pi*i*jk/n};
// inverse conjugates and divides by n, so inverse(forward(x)) == x.
inline void fft_pow2(std::vector<cdouble>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw precondition_error("fft_pow2: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const auto& w = fft_twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        cdouble tw = w[j * stride];
        if (inverse) tw = std::conj(tw);
        const cdouble lo = a[i + j];
        const cdouble hi = a[i + j + len / 2] * tw;
        a[i + j] = lo + hi;
        a[i + j + len / 2] = lo - hi;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / double(n);
    for (auto& x : a) x *= scale;
  }
}

}  // namespace chenlee::detail
