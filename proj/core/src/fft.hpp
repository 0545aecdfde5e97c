#pragma once

#include <complex>
#include <vector>

namespace qtqme::detail {

// Forward DFT, X_k = sum_j x_j exp(-2 pi i jk / m). m need not be a power of two.
std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& x);
// Backward DFT without normalisation, X_k = sum_j x_j exp(+2 pi i jk / m).
std::vector<std::complex<double>> dft_backward(const std::vector<std::complex<double>>& x);

// Batched real linear convolution. For each of ncols columns x (length lx,
// column stride ldx) forms the full convolution with kernel w (length lw)
// and writes entries [offset, offset + len) into y (column stride ldy).
// Entries below the transform's rounding floor are flushed to zero.
void convolve_columns(const double* w, int lw, const double* x, int lx, int ncols,
                      int ldx, int offset, int len, double* y, int ldy);

// Full linear convolution of two real sequences through FFT.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

int next_pow2(int n);

}  // namespace qtqme::detail
