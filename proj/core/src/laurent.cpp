#include "qtqme/laurent.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "fft.hpp"
#include "qtqme/errors.hpp"

namespace qtqme {

Laurent::Laurent(int lo, std::vector<double> coeffs) : lo_(lo), c_(std::move(coeffs)) {
  std::size_t b = 0, e = c_.size();
  while (b < e && c_[b] == 0.0) ++b;
  while (e > b && c_[e - 1] == 0.0) --e;
  if (b == e) {
    c_.clear();
    lo_ = 0;
    return;
  }
  if (b > 0 || e < c_.size()) c_ = std::vector<double>(c_.begin() + b, c_.begin() + e);
  lo_ += static_cast<int>(b);
}

Laurent Laurent::constant(double c) { return Laurent(0, {c}); }

Laurent Laurent::monomial(int k, double c) { return Laurent(k, {c}); }

double Laurent::wiener_norm() const {
  double s = 0.0;
  for (double v : c_) s += std::abs(v);
  return s;
}

double Laurent::sum() const {
  double s = 0.0;
  for (double v : c_) s += v;
  return s;
}

std::complex<double> Laurent::eval(std::complex<double> z) const {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidParameter, "Laurent::eval needs |z| = 1");
  if (c_.empty()) return 0.0;
  const int h = hi();
  std::complex<double> pos = 0.0;
  for (int k = h; k >= 0; --k) pos = pos * z + (*this)[k];
  std::complex<double> neg = 0.0;
  if (lo_ < 0) {
    // sum_{k<0} f_k z^k = w (f_{-1} + w (f_{-2} + ...)) with w = 1/z
    const std::complex<double> w = std::conj(z) / std::norm(z);
    for (int k = lo_; k <= -1; ++k) neg = neg * w + (*this)[k];
    neg *= w;
  }
  return pos + neg;
}

Laurent Laurent::derivative(int order) const {
  if (order < 0) throw Error(ErrorCode::InvalidParameter, "derivative order must be >= 0");
  Laurent f = *this;
  for (int o = 0; o < order; ++o) {
    if (f.is_zero()) return f;
    // d/dz sum f_i z^i = sum i f_i z^(i-1)
    std::vector<double> c(f.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (f.lo_ + static_cast<int>(i)) * f.c_[i];
    f = Laurent(f.lo_ - 1, std::move(c));
  }
  return f;
}

Laurent Laurent::restricted(int lo, int hi) const {
  if (c_.empty()) return {};
  lo = std::max(lo, lo_);
  hi = std::min(hi, this->hi());
  if (lo > hi) return {};
  return Laurent(lo, std::vector<double>(c_.begin() + (lo - lo_), c_.begin() + (hi - lo_) + 1));
}

Laurent Laurent::reversed() const {
  if (c_.empty()) return {};
  return Laurent(-hi(), std::vector<double>(c_.rbegin(), c_.rend()));
}

Laurent Laurent::trimmed(double rel) const {
  if (c_.empty()) return {};
  const double tol = rel * wiener_norm();
  std::size_t b = 0, e = c_.size();
  double acc = 0.0;
  while (b < e && acc + std::abs(c_[b]) < tol) acc += std::abs(c_[b++]);
  acc = 0.0;
  while (e > b && acc + std::abs(c_[e - 1]) < tol) acc += std::abs(c_[--e]);
  return Laurent(lo_ + static_cast<int>(b), std::vector<double>(c_.begin() + b, c_.begin() + e));
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Laurent& Laurent::operator*=(double s) {
  if (s == 0.0) {
    c_.clear();
    lo_ = 0;
    return *this;
  }
  for (double& v : c_) v *= s;
  return *this;
}

Laurent add_exact(const Laurent& f, const Laurent& g, double alpha, double beta) {
  if (f.is_zero() && g.is_zero()) return {};
  if (f.is_zero()) return beta * g;
  if (g.is_zero()) return alpha * f;
  const int lo = std::min(f.lo(), g.lo());
  const int hi = std::max(f.hi(), g.hi());
  std::vector<double> c(hi - lo + 1, 0.0);
  for (int k = f.lo(); k <= f.hi(); ++k) c[k - lo] += alpha * f[k];
  for (int k = g.lo(); k <= g.hi(); ++k) c[k - lo] += beta * g[k];
  return Laurent(lo, std::move(c));
}

Laurent mul_exact(const Laurent& f, const Laurent& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> c(na + nb - 1, 0.0);
  const std::vector<double>& outer = na <= nb ? a : b;
  const std::vector<double>& inner = na <= nb ? b : a;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double s = outer[i];
    if (s == 0.0) continue;
    double* dst = c.data() + i;
    const double* src = inner.data();
    const std::size_t n = inner.size();
    for (std::size_t j = 0; j < n; ++j) dst[j] += s * src[j];
  }
  return Laurent(f.lo() + g.lo(), std::move(c));
}

Laurent operator+(const Laurent& f, const Laurent& g) { return add_exact(f, g).trimmed(); }

Laurent operator-(const Laurent& f, const Laurent& g) { return add_exact(f, g, 1.0, -1.0).trimmed(); }

Laurent operator*(const Laurent& f, const Laurent& g) { return mul_exact(f, g).trimmed(); }

Laurent operator*(double s, const Laurent& f) {
  Laurent r = f;
  r *= s;
  return r;
}

std::vector<std::complex<double>> sample_roots_of_unity(const Laurent& f, int m) {
  if (m <= 0) throw Error(ErrorCode::InvalidParameter, "sample count must be positive");
  std::vector<std::complex<double>> folded(m, 0.0);
  for (int k = f.lo(); k <= f.hi(); ++k) {
    int slot = k % m;
    if (slot < 0) slot += m;
    folded[slot] += f[k];
  }
  // f(w^i) = sum_k f_k exp(2 pi i ik / m), an unnormalised backward transform.
  return detail::dft_backward(folded);
}

Laurent interpolate_roots_of_unity(const std::vector<std::complex<double>>& values) {
  const int m = static_cast<int>(values.size());
  if (m < 2 || (m & (m - 1)) != 0)
    throw Error(ErrorCode::SizeNotPowerOfTwo, "interpolation needs m = 2n a power of two");
  const int n = m / 2;
  double vmax = 0.0;
  for (const auto& v : values) vmax = std::max(vmax, std::abs(v));
  auto spec = detail::dft_forward(values);
  const double imag_tol = 1e-12 * vmax;
  std::vector<double> c(m);
  // Exponent j in [-n+1, n]; slot j for j >= 0 and j + m for j < 0.
  for (int j = -n + 1; j <= n; ++j) {
    const int slot = j >= 0 ? j : j + m;
    std::complex<double> v = spec[slot] / static_cast<double>(m);
    if (std::abs(v.imag()) > imag_tol)
      throw Error(ErrorCode::InvalidParameter, "samples do not come from a real series");
    c[j + n - 1] = v.real();
  }
  const double floor = std::numeric_limits<double>::epsilon() * 0.5 * vmax;
  std::size_t b = 0, e = c.size();
  while (b < e && std::abs(c[b]) <= floor) ++b;
  while (e > b && std::abs(c[e - 1]) <= floor) --e;
  return Laurent(-n + 1 + static_cast<int>(b), std::vector<double>(c.begin() + b, c.begin() + e));
}

void write_text(std::ostream& os, const Laurent& f) {
  const auto prec = os.precision(17);
  os << f.lo() << ' ' << f.size() << '\n';
  for (double v : f.coeffs()) os << v << '\n';
  os.precision(prec);
}

Laurent read_text(std::istream& is) {
  int lo = 0, k = 0;
  if (!(is >> lo >> k) || k < 0) throw Error(ErrorCode::InvalidParameter, "bad Laurent header");
  std::vector<double> c(k);
  for (int i = 0; i < k; ++i)
    if (!(is >> c[i])) throw Error(ErrorCode::InvalidParameter, "truncated Laurent coefficients");
  return Laurent(lo, std::move(c));
}

}  // namespace qtqme
