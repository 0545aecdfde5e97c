#include "qtqme/qtmat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "fft.hpp"
#include "qtqme/errors.hpp"

namespace qtqme {

QtMatrix::QtMatrix(Laurent symbol, Correction correction)
    : symbol_(std::move(symbol)), corr_(std::move(correction)) {
  if (corr_.rows() == 0 || corr_.cols() == 0) corr_.resize(0, 0);
}

QtMatrix QtMatrix::identity() { return QtMatrix(Laurent::constant(1.0)); }

QtMatrix QtMatrix::zero() { return QtMatrix(); }

double QtMatrix::entry(int i, int j) const {
  double v = symbol_[j - i];
  if (i < rows() && j < cols()) v += corr_(i, j);
  return v;
}

QtMatrix QtMatrix::operator-() const { return scale(*this, -1.0); }

QtMatrix scale(const QtMatrix& a, double s) {
  Laurent f = a.symbol();
  f *= s;
  return QtMatrix(std::move(f), a.correction() * s);
}

QtMatrix add(const QtMatrix& a, const QtMatrix& b, double alpha, double beta, double tol) {
  Laurent f = add_exact(a.symbol(), b.symbol(), alpha, beta);
  const int r = std::max(a.rows(), b.rows());
  const int c = std::max(a.cols(), b.cols());
  Correction e = Correction::Zero(r, c);
  if (a.rows() > 0) e.topLeftCorner(a.rows(), a.cols()) += alpha * a.correction();
  if (b.rows() > 0) e.topLeftCorner(b.rows(), b.cols()) += beta * b.correction();
  return compress(QtMatrix(std::move(f), std::move(e)), tol);
}

namespace {

// Coefficients w[s] = f_{-(s + t_lo)} for s = 0..len-1.
std::vector<double> reversed_window(const Laurent& f, int t_lo, int t_hi) {
  std::vector<double> w(t_hi - t_lo + 1);
  for (int s = 0; s < static_cast<int>(w.size()); ++s) w[s] = f[-(s + t_lo)];
  return w;
}

}  // namespace

Eigen::MatrixXd toeplitz_times(const Laurent& f, const Eigen::MatrixXd& e) {
  const int r = static_cast<int>(e.rows());
  const int c = static_cast<int>(e.cols());
  if (f.is_zero() || r == 0 || c == 0) return Eigen::MatrixXd(0, 0);
  const int rr = r + f.neg_extent();
  // Entry (i, j) is sum_k f_{k-i} e(k, j); with t = i - k the needed
  // coefficients are f_{-t}, t in [t_lo, t_hi].
  const int t_lo = std::max(-f.hi(), -(r - 1));
  const int t_hi = std::min(-f.lo(), rr - 1);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rr, c);
  if (t_lo > t_hi) return y;
  const std::vector<double> w = reversed_window(f, t_lo, t_hi);
  const int len = static_cast<int>(w.size());

  const double direct_cost = 4.0 * c * static_cast<double>(r) * len;
  const double gemm_cost = static_cast<double>(rr) * r * c;
  const int n = detail::next_pow2(len + r - 1);
  const double fft_cost = 8.0 * c * static_cast<double>(n) * std::log2(static_cast<double>(n));
  const bool gemm_ok = static_cast<double>(rr) * r <= 2e7;

  if (direct_cost <= fft_cost && (!gemm_ok || direct_cost <= gemm_cost)) {
    for (int j = 0; j < c; ++j) {
      const double* x = e.col(j).data();
      double* yj = y.col(j).data();
      for (int k = 0; k < r; ++k) {
        const double xk = x[k];
        if (xk == 0.0) continue;
        // row i = k + s + t_lo must lie in [0, rr)
        const int s0 = std::max(0, -k - t_lo);
        const int s1 = std::min(len, rr - k - t_lo);
        double* dst = yj + k + t_lo;
        for (int s = s0; s < s1; ++s) dst[s] += w[s] * xk;
      }
    }
  } else if (gemm_ok && gemm_cost <= fft_cost) {
    Eigen::MatrixXd t(rr, r);
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < rr; ++i) t(i, k) = f[k - i];
    y.noalias() = t * e;
  } else {
    detail::convolve_columns(w.data(), len, e.data(), r, c, r, -t_lo, rr, y.data(), rr);
  }
  return y;
}

Eigen::MatrixXd times_toeplitz(const Eigen::MatrixXd& e, const Laurent& f) {
  if (f.is_zero() || e.rows() == 0 || e.cols() == 0) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd et = e.transpose();
  return toeplitz_times(f.reversed(), et).transpose();
}

QtMatrix mul(const QtMatrix& a, const QtMatrix& b, double tol) {
  const Laurent& fa = a.symbol();
  const Laurent& fb = b.symbol();
  Laurent f = mul_exact(fa, fb);

  const int hn = fa.neg_extent();
  const int hc = fb.pos_extent();
  Eigen::MatrixXd ta, tb;
  if (b.rows() > 0) ta = toeplitz_times(fa, b.correction());
  if (a.rows() > 0) tb = times_toeplitz(a.correction(), fb);

  const int inner = std::min(a.cols(), b.rows());
  const int r = std::max<int>({hn, static_cast<int>(ta.rows()), static_cast<int>(tb.rows()),
                               inner > 0 ? a.rows() : 0});
  const int c = std::max<int>({hc, static_cast<int>(ta.cols()), static_cast<int>(tb.cols()),
                               inner > 0 ? b.cols() : 0});
  Correction e = Correction::Zero(r, c);

  // T(fa) T(fb) = T(fa fb) - H(fa^-) H(fb^+):
  // c(i, j) = -sum_{l>=1} fa_{-(i+l)} fb_{j+l} = c(i+1, j+1) - fa_{-(i+1)} fb_{j+1}.
  if (hn > 0 && hc > 0) {
    for (int i = hn - 1; i >= 0; --i) {
      const double ai = fa[-(i + 1)];
      for (int j = hc - 1; j >= 0; --j) {
        const double next = (i + 1 < hn && j + 1 < hc) ? e(i + 1, j + 1) : 0.0;
        e(i, j) = next - ai * fb[j + 1];
      }
    }
  }
  if (ta.size() > 0) e.topLeftCorner(ta.rows(), ta.cols()) += ta;
  if (tb.size() > 0) e.topLeftCorner(tb.rows(), tb.cols()) += tb;
  if (inner > 0) {
    e.topLeftCorner(a.rows(), b.cols()).noalias() +=
        a.correction().leftCols(inner) * b.correction().topRows(inner);
  }
  return compress(QtMatrix(std::move(f), std::move(e)), tol);
}

double inf_norm(const QtMatrix& a) {
  const Laurent& f = a.symbol();
  const double wn = f.wiener_norm();
  const int r = a.rows();
  if (r == 0) return wn;
  const int c = a.cols();
  // suffix[k - lo] = sum_{k' >= k} |f_k'|
  const int lo = f.lo();
  const int sz = f.size();
  std::vector<double> suffix(sz + 1, 0.0);
  for (int i = sz - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + std::abs(f.coeffs()[i]);
  auto tail_from = [&](int k) {
    const int idx = k - lo;
    if (idx <= 0) return suffix[0];
    if (idx >= sz) return 0.0;
    return suffix[idx];
  };
  const Correction& e = a.correction();
  double best = wn;
  for (int i = 0; i < r; ++i) {
    double s = tail_from(c - i);
    for (int j = 0; j < c; ++j) s += std::abs(f[j - i] + e(i, j));
    best = std::max(best, s);
  }
  return best;
}

QtMatrix compress(const QtMatrix& a, double tol) {
  const Laurent& f = a.symbol();
  Laurent g;
  if (!f.is_zero()) {
    const auto& cf = f.coeffs();
    std::size_t b = 0, e = cf.size();
    double acc = 0.0;
    while (b < e && acc + std::abs(cf[b]) <= 0.5 * tol) acc += std::abs(cf[b++]);
    acc = 0.0;
    while (e > b && acc + std::abs(cf[e - 1]) <= 0.5 * tol) acc += std::abs(cf[--e]);
    g = Laurent(f.lo() + static_cast<int>(b), std::vector<double>(cf.begin() + b, cf.begin() + e));
  }
  const Correction& e = a.correction();
  int r = static_cast<int>(e.rows());
  int c = static_cast<int>(e.cols());
  if (r == 0 || c == 0) return QtMatrix(std::move(g));
  while (r > 0 && e.row(r - 1).cwiseAbs().sum() <= tol) --r;
  if (r == 0) return QtMatrix(std::move(g));
  Eigen::VectorXd tail = Eigen::VectorXd::Zero(r);
  while (c > 0) {
    Eigen::VectorXd t = tail + e.col(c - 1).head(r).cwiseAbs();
    if (t.maxCoeff() > tol) break;
    tail = std::move(t);
    --c;
  }
  if (c == 0) return QtMatrix(std::move(g));
  if (r == e.rows() && c == e.cols()) return QtMatrix(std::move(g), e);
  return QtMatrix(std::move(g), e.topLeftCorner(r, c));
}

QtMatrix neumann_series(const QtMatrix& b, double tol, NeumannInfo* info) {
  const double nb = inf_norm(b);
  const double inner_tol = tol / 10.0;
  QtMatrix s = QtMatrix::identity();
  QtMatrix p = b;
  long terms = 1;
  int squarings = 0;
  // Tail after the anchor k: sum_{i >= 2^j} B^i = S_k P_j (I - P_k)^{-1}, so
  // |tail| <= |S_k| |P_j| / (1 - |P_k|). The anchor is the first power with
  // norm below one; usually k = 0.
  double pk = nb, scale = 0.0, pow_bound = nb;
  bool anchored = nb < 1.0 - 1e-12;
  if (anchored) scale = 1.0 / (1.0 - nb);
  double tail = 0.0;
  for (;;) {
    // s holds sum_{i < terms} B^i and p = B^terms.
    const double np = inf_norm(p);
    if (!anchored) {
      if (np < 1.0 - 1e-12) {
        anchored = true;
        pk = pow_bound = np;
        scale = inf_norm(s) / (1.0 - np);
      } else if (squarings >= kMaxAnchorSquarings) {
        throw Error(ErrorCode::NotContraction,
                    "Neumann series needs |B^k| < 1 for some k <= " + std::to_string(terms) +
                        ", got |B| = " + std::to_string(nb));
      }
    }
    if (anchored) {
      tail = scale * std::min(pow_bound, np);
      if (tail <= tol || squarings > 60) break;
      pow_bound *= pow_bound;
    }
    s = add(s, mul(s, p, inner_tol), 1.0, 1.0, inner_tol);
    terms *= 2;
    p = mul(p, p, inner_tol);
    ++squarings;
  }
  if (info) {
    info->b_norm = nb;
    info->anchor_norm = pk;
    info->squarings = squarings;
    info->terms = terms;
    info->tail_bound = tail;
  }
  return compress(s, inner_tol);
}

QtMatrix neumann_series(const QtMatrix& b, double tol) { return neumann_series(b, tol, nullptr); }

std::optional<QtMatrix> refine_inverse(const QtMatrix& b, QtMatrix y, double tol, int max_steps) {
  const double inner_tol = tol / 10.0;
  for (int it = 0;; ++it) {
    // R = I - (I - B) Y; then (I - B)^{-1} - Y = (I - B)^{-1} R.
    QtMatrix r = add(QtMatrix::identity(), y, 1.0, -1.0, inner_tol);
    r = add(r, mul(b, y, inner_tol), 1.0, 1.0, inner_tol);
    const double rn = inf_norm(r);
    if (rn >= 0.5) return std::nullopt;
    if (inf_norm(y) * rn / (1.0 - rn) <= tol) return compress(y, inner_tol);
    if (it >= max_steps) return std::nullopt;
    y = add(y, mul(y, r, inner_tol), 1.0, 1.0, inner_tol);
    // The new residual is R^2, which sits below the rounding floor of a recomputed R.
    const double r2 = rn * rn;
    if (inf_norm(y) * r2 / (1.0 - r2) <= tol) return compress(y, inner_tol);
  }
}

QtMatrix neumann_inverse(const QtMatrix& m, double rho_hint, double tol) {
  if (!(rho_hint > 0.0)) throw Error(ErrorCode::InvalidParameter, "rho_hint must be positive");
  QtMatrix b = add(QtMatrix::identity(), m, 1.0, -1.0, 0.0);
  return neumann_series(b, tol);
}

Eigen::MatrixXd window(const QtMatrix& a, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "window size must be >= 1");
  Eigen::MatrixXd w(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) w(i, j) = a.entry(i, j);
  return w;
}

std::vector<double> row_sums_defect(const QtMatrix& a, int k) {
  const Laurent& f = a.symbol();
  const int lo = f.lo();
  const int sz = f.size();
  std::vector<double> suffix(sz + 1, 0.0);
  for (int i = sz - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + f.coeffs()[i];
  std::vector<double> d(std::max(k, 0));
  for (int i = 0; i < k; ++i) {
    const int idx = -i - lo;
    double s = idx <= 0 ? suffix[0] : (idx >= sz ? 0.0 : suffix[idx]);
    if (i < a.rows()) s += a.correction().row(i).sum();
    d[i] = 1.0 - s;
  }
  return d;
}

void write_text(std::ostream& os, const QtMatrix& a) {
  const auto prec = os.precision(17);
  os << "symbol ";
  write_text(os, a.symbol());
  os << "correction " << a.rows() << ' ' << a.cols() << '\n';
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a.correction()(i, j);
    os << '\n';
  }
  os.precision(prec);
}

QtMatrix read_qt_text(std::istream& is) {
  std::string tag;
  if (!(is >> tag) || tag != "symbol") throw Error(ErrorCode::InvalidParameter, "expected 'symbol'");
  Laurent f = read_text(is);
  int r = 0, c = 0;
  if (!(is >> tag >> r >> c) || tag != "correction" || r < 0 || c < 0)
    throw Error(ErrorCode::InvalidParameter, "expected 'correction rows cols'");
  Correction e(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (!(is >> e(i, j))) throw Error(ErrorCode::InvalidParameter, "truncated correction");
  return QtMatrix(std::move(f), std::move(e));
}

}  // namespace qtqme
