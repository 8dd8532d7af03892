#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace nbv {

using Complex = std::complex<double>;

namespace detail {

inline bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place, forward transform.
inline void fft_radix2(std::vector<Complex>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// O(n^2) fallback for non-power-of-two lengths.
inline void dft_direct(std::vector<Complex>& a) {
  const size_t n = a.size();
  std::vector<Complex> out(n);
  for (size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (size_t j = 0; j < n; ++j) {
      const double ang =
          -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      acc += a[j] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

}  // namespace detail

/// Forward 1D DFT, unnormalized.
inline void fft_1d(std::vector<Complex>& a) {
  if (detail::is_pow2(a.size()))
    detail::fft_radix2(a);
  else
    detail::dft_direct(a);
}

/// Forward 2D DFT of a row-major width x height grid, unnormalized.
/// Transforms rows then columns.
inline std::vector<Complex> fft_2d(const std::vector<double>& data, int width, int height) {
  std::vector<Complex> grid(data.begin(), data.end());
  std::vector<Complex> line;
  line.reserve(static_cast<size_t>(std::max(width, height)));
  for (int y = 0; y < height; ++y) {
    line.assign(grid.begin() + static_cast<size_t>(y) * width,
                grid.begin() + static_cast<size_t>(y + 1) * width);
    fft_1d(line);
    std::copy(line.begin(), line.end(), grid.begin() + static_cast<size_t>(y) * width);
  }
  for (int x = 0; x < width; ++x) {
    line.resize(static_cast<size_t>(height));
    for (int y = 0; y < height; ++y) line[y] = grid[static_cast<size_t>(y) * width + x];
    fft_1d(line);
    for (int y = 0; y < height; ++y) grid[static_cast<size_t>(y) * width + x] = line[y];
  }
  return grid;
}

}  // namespace nbv
