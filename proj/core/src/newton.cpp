#include "qtqme/newton.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qtqme/errors.hpp"

namespace qtqme {

QtMatrix sylvester_series(const QbdModel& m, const QtMatrix& x, const QtMatrix& rhs, double tol,
                          SylvesterInfo* info) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "sylvester tolerance must be positive");
  const double t10 = tol / 10;
  const QtMatrix b = add(m.A_0, mul(m.A_1, x, t10), 1.0, 1.0, t10);
  const QtMatrix winv = neumann_series(b, t10);
  const QtMatrix s = mul(winv, m.A_1, t10);
  const QtMatrix v = mul(winv, rhs, t10);
  const double sn = inf_norm(s), xn = inf_norm(x), vn = inf_norm(v);
  // Terms are grouped in blocks of p = 2^k with q_p = |S^p| |X^p| < 1; then the
  // tail after i + p terms is at most q_p (|T_i| + ... + |T_{i+p-1}|) / (1 - q_p).
  // Along Newton from zero under the drift condition p = 1.
  int p = 1;
  double q = sn * xn;
  if (q >= 1.0 - 1e-12) {
    QtMatrix sp = s, xp = x;
    while (q >= 1.0 - 1e-12) {
      if (p >= kMaxSylvesterBlock)
        throw Error(ErrorCode::NotContraction, "|S^p| |X^p| = " + std::to_string(q) +
                                                   " is not below 1 for p <= " + std::to_string(p) +
                                                   " in the Sylvester series");
      sp = mul(sp, sp, t10);
      xp = mul(xp, xp, t10);
      p *= 2;
      q = inf_norm(sp) * inf_norm(xp);
    }
  }

  const double ct = tol * (1.0 - q) / (10 * p);
  QtMatrix term = v;
  QtMatrix z = v;
  int terms = 1;
  double bound = 0.0;
  double powq = q;             // q^{i+1}, used when p = 1
  std::vector<double> recent;  // norms of the last p terms
  recent.push_back(vn);
  for (;;) {
    if (static_cast<int>(recent.size()) > p) recent.erase(recent.begin());
    double block = 0.0;
    for (double r : recent) block += r;
    bound = q * block / (1.0 - q);
    if (p == 1) bound = std::min(bound, powq * vn / (1.0 - q));
    if ((static_cast<int>(recent.size()) == p && bound <= tol / 2) || vn == 0.0) break;
    term = mul(mul(s, term, ct), x, ct);
    z = add(z, term, 1.0, 1.0, ct);
    recent.push_back(inf_norm(term));
    ++terms;
    powq *= q;
  }
  z = scale(z, -1.0);

  // (A_1 X + A_0 - I) Z + A_1 Z X - rhs = -W Z + A_1 Z X - rhs
  const QtMatrix wz = add(z, mul(b, z, t10), 1.0, -1.0, t10);
  QtMatrix chk = add(mul(mul(m.A_1, z, t10), x, t10), wz, 1.0, -1.0, t10);
  chk = add(chk, rhs, 1.0, -1.0, t10);
  const double back = inf_norm(chk);
  if (info) *info = SylvesterInfo{sn, xn, terms, p, bound, back};
  if (back > 10 * tol)
    throw Error(ErrorCode::BackSubstitutionFailed,
                "Sylvester back-substitution residual " + std::to_string(back) + " exceeds " +
                    std::to_string(10 * tol));
  return z;
}

namespace {

double max_window_entry(const QtMatrix& z) {
  const int k = std::min(600, std::max(z.rows(), z.cols()) + z.symbol().size() + 1);
  return window(z, k).maxCoeff();
}

}  // namespace

SolveReport newton_solve(const QbdModel& m, const NewtonConfig& cfg) {
  if (!(cfg.eps_residual > 0.0) || cfg.max_iter < 1)
    throw Error(ErrorCode::InvalidParameter, "eps_residual > 0 and max_iter >= 1 required");
  const double stol = cfg.sylvester_tol > 0.0 ? cfg.sylvester_tol : cfg.eps_residual / 100;
  SolveReport rep;
  rep.rate_constants = rate_constants(m);
  const DriftReport drift = drift_check(m);
  if (!drift.interior_ok) rep.warnings.push_back("interior drift condition fails");
  if (!drift.boundary_ok) rep.warnings.push_back("boundary drift condition fails");

  QtMatrix x = cfg.warm_start ? *cfg.warm_start : QtMatrix::zero();
  const double tol = cfg.compress_tol;
  rep.max_positive_step_entry = -1.0;
  for (int k = 0;; ++k) {
    const QtMatrix l = l_of(m, x, tol / 10);
    const double res = inf_norm(l);
    rep.residuals.push_back(res);
    rep.correction_dims.emplace_back(x.rows(), x.cols());
    if (cfg.observer) cfg.observer(k, x);
    if (res <= cfg.eps_residual) {
      rep.stop_reason = StopReason::Converged;
      rep.iterations = k;
      break;
    }
    if (k >= cfg.max_iter) {
      rep.stop_reason = StopReason::MaxIterExceeded;
      rep.iterations = k;
      break;
    }
    SylvesterInfo info;
    const QtMatrix z = sylvester_series(m, x, l, stol, &info);
    rep.step_norms.push_back(inf_norm(z));
    rep.backsub_residuals.push_back(info.backsub_residual);
    rep.sylvester_terms.push_back(info.terms);
    rep.max_positive_step_entry = std::max(rep.max_positive_step_entry, max_window_entry(z));
    x = add(x, z, 1.0, -1.0, tol);
  }
  rep.solution = compress(x, tol);
  return rep;
}

}  // namespace qtqme
