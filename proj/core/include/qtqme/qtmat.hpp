#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qtqme/laurent.hpp"

namespace qtqme {

// Dense top-left correction block; entry (i, j) is e_{i+1, j+1}.
using Correction = Eigen::MatrixXd;

inline constexpr double kIterTol = 1e-15;
inline constexpr double kOutputTol = 1e-13;

// Semi-infinite matrix T(f) + E with T(f)_{ij} = f_{j-i}.
class QtMatrix {
 public:
  QtMatrix() = default;
  explicit QtMatrix(Laurent symbol, Correction correction = Correction());

  static QtMatrix identity();
  static QtMatrix zero();

  const Laurent& symbol() const { return symbol_; }
  const Correction& correction() const { return corr_; }
  int rows() const { return static_cast<int>(corr_.rows()); }
  int cols() const { return static_cast<int>(corr_.cols()); }

  // Entry in 0-based indexing.
  double entry(int i, int j) const;

  QtMatrix operator-() const;

 private:
  Laurent symbol_;
  Correction corr_;
};

// alpha A + beta B, compressed at tol.
QtMatrix add(const QtMatrix& a, const QtMatrix& b, double alpha = 1.0, double beta = 1.0,
             double tol = kIterTol);
QtMatrix scale(const QtMatrix& a, double s);
QtMatrix mul(const QtMatrix& a, const QtMatrix& b, double tol = kIterTol);

inline QtMatrix operator+(const QtMatrix& a, const QtMatrix& b) { return add(a, b); }
inline QtMatrix operator-(const QtMatrix& a, const QtMatrix& b) { return add(a, b, 1.0, -1.0); }
inline QtMatrix operator*(const QtMatrix& a, const QtMatrix& b) { return mul(a, b); }
inline QtMatrix operator*(double s, const QtMatrix& a) { return scale(a, s); }

// sup_i sum_j |a_ij|, exact for the represented matrix.
double inf_norm(const QtMatrix& a);

// Drops symbol tails of mass <= tol/2 on each side, trailing correction rows
// of mass <= tol and trailing columns whose removed mass is <= tol in every
// row. inf_norm(a - compress(a, tol)) <= 2 tol.
QtMatrix compress(const QtMatrix& a, double tol);

// sum_{i<=k} B^i for M = I - B, by repeated squaring; k is chosen so that the
// tail bound is below tol. When |B| >= 1 it keeps squaring until some
// |B^(2^k)| < 1, for k <= kMaxAnchorSquarings, and throws NotContraction
// otherwise.
QtMatrix neumann_inverse(const QtMatrix& m, double rho_hint, double tol);
// Same, taking B directly.
QtMatrix neumann_series(const QtMatrix& b, double tol);

inline constexpr int kMaxAnchorSquarings = 4;

struct NeumannInfo {
  double b_norm = 0.0;
  double anchor_norm = 0.0;  // |B^(2^k)| at the first power below one
  int squarings = 0;
  long terms = 0;
  double tail_bound = 0.0;
};
QtMatrix neumann_series(const QtMatrix& b, double tol, NeumannInfo* info);

// Newton-Schulz refinement of an approximate inverse y of I - B. Returns the
// refined inverse once its certified error is <= tol, or nothing when
// |I - (I - B) y| >= 1/2 or max_steps refinements do not suffice.
std::optional<QtMatrix> refine_inverse(const QtMatrix& b, QtMatrix y, double tol, int max_steps = 4);

// Leading k x k block.
Eigen::MatrixXd window(const QtMatrix& a, int k);

// 1 - (sum of row i) for the first k rows.
std::vector<double> row_sums_defect(const QtMatrix& a, int k);

// Toeplitz block times a dense block: rows r + neg_extent(f) of T(f) E where E has r rows.
Eigen::MatrixXd toeplitz_times(const Laurent& f, const Eigen::MatrixXd& e);
// Dense block times a Toeplitz block: columns c + pos_extent(f) of E T(f).
Eigen::MatrixXd times_toeplitz(const Eigen::MatrixXd& e, const Laurent& f);

void write_text(std::ostream& os, const QtMatrix& a);
QtMatrix read_qt_text(std::istream& is);

}  // namespace qtqme
