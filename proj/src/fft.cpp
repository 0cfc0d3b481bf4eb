#include "curvlab/fft.hpp"

#include <cmath>

namespace curvlab {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::complex<double>* a, int n, bool inverse) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / len * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void fft2_inplace(std::vector<std::complex<double>>& grid, int n, bool inverse) {
  std::vector<std::complex<double>> col(n);
  for (int j = 0; j < n; ++j) fft_inplace(grid.data() + static_cast<size_t>(j) * n, n, inverse);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[j] = grid[static_cast<size_t>(j) * n + i];
    fft_inplace(col.data(), n, inverse);
    for (int j = 0; j < n; ++j) grid[static_cast<size_t>(j) * n + i] = col[j];
  }
  if (inverse) {
    double scale = 1.0 / (static_cast<double>(n) * n);
    for (auto& z : grid) z *= scale;
  }
}

}  // namespace curvlab
