#pragma once

#include <algorithm>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace qtqme {

// Finitely supported Laurent series f(z) = sum_i f_i z^i, stored as the
// coefficients of exponents lo .. lo + size - 1.
class Laurent {
 public:
  Laurent() = default;
  // Leading and trailing exact zeros are removed.
  Laurent(int lo, std::vector<double> coeffs);

  static Laurent constant(double c);
  static Laurent monomial(int k, double c = 1.0);

  bool is_zero() const { return c_.empty(); }
  int lo() const { return c_.empty() ? 0 : lo_; }
  // Largest stored exponent; lo() - 1 for the zero series.
  int hi() const { return lo() + static_cast<int>(c_.size()) - 1; }
  int size() const { return static_cast<int>(c_.size()); }
  const std::vector<double>& coeffs() const { return c_; }

  // Coefficient of z^k, zero outside the support.
  double operator[](int k) const {
    const int i = k - lo_;
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0.0;
  }

  // Number of strictly negative / positive exponents that can be nonzero.
  int neg_extent() const { return is_zero() ? 0 : std::max(0, -lo_); }
  int pos_extent() const { return is_zero() ? 0 : std::max(0, hi()); }

  double wiener_norm() const;
  double sum() const;  // f(1)

  // Evaluation on the unit circle; throws InvalidParameter when ||z|-1| > 1e-12.
  std::complex<double> eval(std::complex<double> z) const;
  double eval_at_one() const { return sum(); }

  Laurent derivative(int order = 1) const;
  // Coefficients restricted to exponents in [lo, hi].
  Laurent restricted(int lo, int hi) const;
  // f(1/z).
  Laurent reversed() const;
  // Drops tails whose absolute sum is below rel * wiener_norm.
  Laurent trimmed(double rel = 1e-15) const;

  Laurent operator-() const;
  Laurent& operator*=(double s);

  bool operator==(const Laurent& o) const { return lo() == o.lo() && c_ == o.c_; }

 private:
  int lo_ = 0;
  std::vector<double> c_;
};

// Arithmetic trims tails below 1e-15 of the result's Wiener norm.
Laurent operator+(const Laurent& f, const Laurent& g);
Laurent operator-(const Laurent& f, const Laurent& g);
Laurent operator*(const Laurent& f, const Laurent& g);
Laurent operator*(double s, const Laurent& f);

// Exact versions: only exact zeros are removed.
Laurent add_exact(const Laurent& f, const Laurent& g, double alpha = 1.0, double beta = 1.0);
Laurent mul_exact(const Laurent& f, const Laurent& g);

// Values at the m-th roots of unity w^i, i = 0..m-1, w = exp(2 pi i / m).
// Exponents are folded modulo m, so the result is exact for any support.
std::vector<std::complex<double>> sample_roots_of_unity(const Laurent& f, int m);

// Inverse of sampling for m = 2n a power of two: returns sum_{j=-n+1}^{n} c_j z^j
// interpolating the values. Exponent j < 0 is read from DFT slot j + m.
// Imaginary parts below 1e-12 max|v| are discarded and end coefficients at
// rounding level (|c| <= u max|v|) are dropped.
Laurent interpolate_roots_of_unity(const std::vector<std::complex<double>>& values);

// Text form: a "lo k" header line followed by k coefficients, one per line.
void write_text(std::ostream& os, const Laurent& f);
Laurent read_text(std::istream& is);

}  // namespace qtqme
