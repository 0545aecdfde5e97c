#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace qtqme::detail {
namespace {

std::mutex plan_mutex;

struct RealPlan {
  int n = 0;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~RealPlan() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(in);
    fftw_free(out);
  }
};

// Plans are created once per size and reused through the new-array execute
// interface, so callers only need buffers from fftw_malloc.
RealPlan& real_plan(int n) {
  static std::map<int, std::unique_ptr<RealPlan>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<RealPlan>();
    slot->n = n;
    slot->in = fftw_alloc_real(n);
    slot->out = fftw_alloc_complex(n / 2 + 1);
    slot->r2c = fftw_plan_dft_r2c_1d(n, slot->in, slot->out, FFTW_ESTIMATE);
    slot->c2r = fftw_plan_dft_c2r_1d(n, slot->out, slot->in, FFTW_ESTIMATE);
  }
  return *slot;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, int sign) {
  const int m = static_cast<int>(x.size());
  std::vector<std::complex<double>> y(x.size());
  if (m == 0) return y;
  fftw_complex* buf = fftw_alloc_complex(m);
  std::memcpy(buf, x.data(), sizeof(fftw_complex) * m);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    p = fftw_plan_dft_1d(m, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(p);
  std::memcpy(static_cast<void*>(y.data()), buf, sizeof(fftw_complex) * m);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(p);
  }
  fftw_free(buf);
  return y;
}

struct FftwBuffers {
  double* re = nullptr;
  fftw_complex* w = nullptr;
  fftw_complex* c = nullptr;
  explicit FftwBuffers(int n)
      : re(fftw_alloc_real(n)), w(fftw_alloc_complex(n / 2 + 1)), c(fftw_alloc_complex(n / 2 + 1)) {}
  ~FftwBuffers() {
    fftw_free(re);
    fftw_free(w);
    fftw_free(c);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;
};

}  // namespace

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> dft_forward(const std::vector<std::complex<double>>& x) {
  return dft(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> dft_backward(const std::vector<std::complex<double>>& x) {
  return dft(x, FFTW_BACKWARD);
}

void convolve_columns(const double* w, int lw, const double* x, int lx, int ncols, int ldx,
                      int offset, int len, double* y, int ldy) {
  if (len <= 0 || ncols <= 0) return;
  if (lw <= 0 || lx <= 0) {
    for (int j = 0; j < ncols; ++j) std::fill(y + static_cast<long>(j) * ldy, y + static_cast<long>(j) * ldy + len, 0.0);
    return;
  }
  const int n = next_pow2(lw + lx - 1);
  RealPlan& plan = real_plan(n);
  FftwBuffers buf(n);
  const int nc = n / 2 + 1;

  std::fill(buf.re, buf.re + n, 0.0);
  std::copy(w, w + lw, buf.re);
  fftw_execute_dft_r2c(plan.r2c, buf.re, buf.w);
  double wnorm = 0.0;
  for (int i = 0; i < lw; ++i) wnorm += w[i] * w[i];
  wnorm = std::sqrt(wnorm);

  // Observed error of an r2c/c2r convolution is a few ulps of |w|_2 |x|_2.
  const double floor_factor = 4.0 * std::sqrt(std::log2(static_cast<double>(n))) * 0x1p-53;
  const double scale = 1.0 / n;

  for (int j = 0; j < ncols; ++j) {
    const double* xj = x + static_cast<long>(j) * ldx;
    double* yj = y + static_cast<long>(j) * ldy;
    double xnorm = 0.0;
    for (int i = 0; i < lx; ++i) xnorm += xj[i] * xj[i];
    if (xnorm == 0.0) {
      std::fill(yj, yj + len, 0.0);
      continue;
    }
    xnorm = std::sqrt(xnorm);
    std::fill(buf.re, buf.re + n, 0.0);
    std::copy(xj, xj + lx, buf.re);
    fftw_execute_dft_r2c(plan.r2c, buf.re, buf.c);
    for (int k = 0; k < nc; ++k) {
      const double ar = buf.w[k][0], ai = buf.w[k][1];
      const double br = buf.c[k][0], bi = buf.c[k][1];
      buf.c[k][0] = ar * br - ai * bi;
      buf.c[k][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(plan.c2r, buf.c, buf.re);
    const double thr = floor_factor * wnorm * xnorm;
    const int full = lw + lx - 1;
    for (int i = 0; i < len; ++i) {
      const int k = offset + i;
      double v = (k >= 0 && k < full) ? buf.re[k] * scale : 0.0;
      yj[i] = std::abs(v) <= thr ? 0.0 : v;
    }
  }
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const int full = static_cast<int>(a.size() + b.size() - 1);
  std::vector<double> y(full);
  convolve_columns(a.data(), static_cast<int>(a.size()), b.data(), static_cast<int>(b.size()), 1,
                   static_cast<int>(b.size()), 0, full, y.data(), full);
  return y;
}

}  // namespace qtqme::detail
