#ifndef CURVLAB_FFT_HPP
#define CURVLAB_FFT_HPP

#include <complex>
#include <vector>

namespace curvlab {

// In-place radix-2 complex FFT; n must be a power of two.
void fft_inplace(std::complex<double>* data, int n, bool inverse);

// Row-column 2-D transform of an n*n grid (row-major). Inverse includes the
// 1/n^2 normalization.
void fft2_inplace(std::vector<std::complex<double>>& grid, int n, bool inverse);

bool is_power_of_two(int n);

}  // namespace curvlab

#endif
