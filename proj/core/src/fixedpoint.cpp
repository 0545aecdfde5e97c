#include "qtqme/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtqme/errors.hpp"

namespace qtqme {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::F1: return "f1";
    case Variant::F2: return "f2";
    case Variant::F3: return "f3";
  }
  return "?";
}

const char* to_string(Mode m) { return m == Mode::Whole ? "whole" : "correction"; }

const char* to_string(Start s) {
  switch (s) {
    case Start::Zero: return "zero";
    case Start::Identity: return "identity";
    case Start::ToeplitzOnly: return "toeplitz";
    case Start::ToeplitzStochastic: return "stochastic";
  }
  return "?";
}

const char* to_string(StopReason r) {
  return r == StopReason::Converged ? "converged" : "max_iter_exceeded";
}

Variant parse_variant(const std::string& s) {
  if (s == "f1" || s == "F1") return Variant::F1;
  if (s == "f2" || s == "F2") return Variant::F2;
  if (s == "f3" || s == "F3") return Variant::F3;
  throw Error(ErrorCode::InvalidParameter, "unknown variant '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "whole") return Mode::Whole;
  if (s == "correction" || s == "correction_only") return Mode::CorrectionOnly;
  throw Error(ErrorCode::InvalidParameter, "unknown mode '" + s + "'");
}

Start parse_start(const std::string& s) {
  if (s == "zero") return Start::Zero;
  if (s == "identity") return Start::Identity;
  if (s == "toeplitz") return Start::ToeplitzOnly;
  if (s == "stochastic") return Start::ToeplitzStochastic;
  throw Error(ErrorCode::InvalidParameter, "unknown start '" + s + "'");
}

RateConstants rate_constants(const QbdModel& m) {
  RateConstants r;
  const double am1 = m.a_m1.sum(), a1 = m.a_1.sum();
  const double bm1 = m.b_m1.sum(), b1 = m.b_1.sum();
  const bool interior = am1 > a1;
  const bool boundary = bm1 > b1;
  r.drift_ok = interior && boundary;
  if (r.drift_ok) {
    r.theta = std::min(am1, bm1);
    r.gamma = std::max(a1 / am1, b1 / bm1);
    r.sigma = 1.0 - std::min(am1 - a1, bm1 - b1);
  } else if (interior) {
    r.interior_only = true;
    r.theta = am1;
    r.gamma = a1 / am1;
    r.sigma = 1.0 - (am1 - a1);
  } else {
    r.theta = std::min(am1, bm1);
    r.gamma = std::numeric_limits<double>::infinity();
    r.sigma = std::numeric_limits<double>::infinity();
  }
  r.tau = std::min(r.gamma, r.sigma);
  return r;
}

QtMatrix l_of(const QbdModel& m, const QtMatrix& x, double tol) {
  const QtMatrix x2 = mul(x, x, tol);
  QtMatrix r = add(mul(m.A_1, x2, tol), mul(m.A_0, x, tol), 1.0, 1.0, tol);
  r = add(r, x, 1.0, -1.0, tol);
  return add(r, m.A_m1, 1.0, 1.0, tol);
}

double residual(const QbdModel& m, const QtMatrix& x) { return inf_norm(l_of(m, x)); }

QtMatrix make_start(const QbdModel& m, Start kind, const Laurent& g_hat, double compress_tol) {
  (void)m;
  switch (kind) {
    case Start::Zero: return QtMatrix::zero();
    case Start::Identity: return QtMatrix::identity();
    case Start::ToeplitzOnly: return QtMatrix(g_hat);
    case Start::ToeplitzStochastic: {
      // Row i of T(g) misses g_k for k <= -(i+1); put that mass in column 0.
      const int rows = g_hat.neg_extent();
      std::vector<double> v(rows, 0.0);
      double acc = 0.0;
      for (int i = rows - 1; i >= 0; --i) {
        acc += g_hat[-(i + 1)];
        v[i] = acc;
      }
      int keep = rows;
      while (keep > 0 && v[keep - 1] < compress_tol) --keep;
      Correction e(keep, 1);
      for (int i = 0; i < keep; ++i) e(i, 0) = v[i];
      return QtMatrix(g_hat, e);
    }
  }
  return QtMatrix::zero();
}

QtMatrix w_inverse(const QbdModel& m, const QtMatrix& x, double tol) {
  const QtMatrix b = add(m.A_0, mul(m.A_1, x, tol / 10), 1.0, 1.0, tol / 10);
  return neumann_series(b, tol);
}

WholeStepper::WholeStepper(const QbdModel& m, Variant v, double tol, bool refine_inverse)
    : m_(m), v_(v), tol_(tol), refine_(refine_inverse) {
  if (v_ == Variant::F2) inv0_ = neumann_series(m_.A_0, tol_ / 10);
}

QtMatrix WholeStepper::step(const QtMatrix& x) {
  if (v_ == Variant::F3) return step(x, QtMatrix());
  return step(x, mul(x, x, tol_));
}

QtMatrix WholeStepper::step(const QtMatrix& x, const QtMatrix& x2) {
  switch (v_) {
    case Variant::F1: {
      QtMatrix r = add(m_.A_m1, mul(m_.A_0, x, tol_), 1.0, 1.0, tol_);
      return add(r, mul(m_.A_1, x2, tol_), 1.0, 1.0, tol_);
    }
    case Variant::F2: {
      const QtMatrix rhs = add(m_.A_m1, mul(m_.A_1, x2, tol_), 1.0, 1.0, tol_);
      return mul(inv0_, rhs, tol_);
    }
    case Variant::F3: {
      const QtMatrix b = add(m_.A_0, mul(m_.A_1, x, tol_ / 10), 1.0, 1.0, tol_ / 10);
      std::optional<QtMatrix> winv;
      if (winv_) winv = refine_inverse(b, *winv_, tol_);
      if (!winv) winv = neumann_series(b, tol_);
      if (refine_) winv_ = winv;
      return mul(*winv, m_.A_m1, tol_);
    }
  }
  return x;
}

QtMatrix step_whole(const QbdModel& m, const QtMatrix& x, Variant v, double tol) {
  return WholeStepper(m, v, tol).step(x);
}

CorrectionData prepare_correction(const QbdModel& m, const Laurent& g_hat, Variant v, double tol) {
  CorrectionData d;
  d.variant = v;
  d.t = QtMatrix(g_hat);
  const double t10 = tol / 10;
  switch (v) {
    case Variant::F1: {
      const QtMatrix t2 = mul(d.t, d.t, t10);
      QtMatrix f = add(mul(m.A_1, t2, t10), mul(m.A_0, d.t, t10), 1.0, 1.0, t10);
      f = add(f, m.A_m1, 1.0, 1.0, t10);
      d.f = add(f, d.t, 1.0, -1.0, t10);
      d.s = add(m.A_0, mul(m.A_1, d.t, t10), 1.0, 1.0, t10);
      break;
    }
    case Variant::F2: {
      const QtMatrix inv0 = neumann_series(m.A_0, t10);
      d.s_hat = mul(inv0, m.A_1, t10);
      const QtMatrix t2 = mul(d.t, d.t, t10);
      const QtMatrix rhs = add(mul(m.A_1, t2, t10), m.A_m1, 1.0, 1.0, t10);
      d.s_tilde = add(mul(inv0, rhs, t10), d.t, 1.0, -1.0, t10);
      break;
    }
    case Variant::F3: {
      const QtMatrix winv = w_inverse(m, d.t, t10);
      d.v_hat = mul(winv, m.A_1, t10);
      d.v_tilde = add(mul(winv, m.A_m1, t10), d.t, 1.0, -1.0, t10);
      break;
    }
  }
  return d;
}

QtMatrix step_correction(const QbdModel& m, const QtMatrix& e, const CorrectionData& d, double tol) {
  switch (d.variant) {
    case Variant::F1: {
      // E' = F + (A_1 E + S) E + A_1 E T
      const QtMatrix a1e = mul(m.A_1, e, tol);
      const QtMatrix left = mul(add(a1e, d.s, 1.0, 1.0, tol), e, tol);
      QtMatrix r = add(d.f, left, 1.0, 1.0, tol);
      return add(r, mul(a1e, d.t, tol), 1.0, 1.0, tol);
    }
    case Variant::F2: {
      // E' = S_hat ((T + E) E + E T) + S_tilde
      const QtMatrix x = add(d.t, e, 1.0, 1.0, tol);
      const QtMatrix inner = add(mul(x, e, tol), mul(e, d.t, tol), 1.0, 1.0, tol);
      return add(mul(d.s_hat, inner, tol), d.s_tilde, 1.0, 1.0, tol);
    }
    case Variant::F3: {
      // E' = V_hat E (I - A_1 (T + E) - A_0)^{-1} A_-1 + V_tilde
      const QtMatrix x = add(d.t, e, 1.0, 1.0, tol);
      const QtMatrix next = mul(w_inverse(m, x, tol), m.A_m1, tol);
      return add(mul(mul(d.v_hat, e, tol), next, tol), d.v_tilde, 1.0, 1.0, tol);
    }
  }
  return e;
}

namespace {

void fill_h_norms(const QbdModel& m, const QtMatrix& g, double tol, RateConstants& rc) {
  const QtMatrix a1g = mul(m.A_1, g, tol);
  const QtMatrix a1_plus = add(m.A_1, a1g, 1.0, 1.0, tol);
  rc.h1 = inf_norm(add(m.A_0, a1_plus, 1.0, 1.0, tol));
  rc.h2 = inf_norm(mul(neumann_series(m.A_0, tol), a1_plus, tol));
  rc.h3 = inf_norm(mul(w_inverse(m, g, tol), m.A_1, tol));
}

}  // namespace

SolveReport solve(const QbdModel& m, const FpConfig& cfg, const Laurent& g_hat) {
  if (!(cfg.eps_residual > 0.0) || cfg.max_iter < 1)
    throw Error(ErrorCode::InvalidParameter, "eps_residual > 0 and max_iter >= 1 required");
  SolveReport rep;
  rep.rate_constants = rate_constants(m);
  const DriftReport drift = drift_check(m);
  if (!drift.interior_ok) rep.warnings.push_back("interior drift condition fails");
  if (!drift.boundary_ok) rep.warnings.push_back("boundary drift condition fails");

  const double tol = cfg.compress_tol;
  const bool needs_g = cfg.start == Start::ToeplitzOnly || cfg.start == Start::ToeplitzStochastic ||
                       cfg.mode == Mode::CorrectionOnly;
  if (needs_g && g_hat.is_zero())
    throw Error(ErrorCode::InvalidParameter, "this start or mode needs the symbol g");

  QtMatrix x = make_start(m, cfg.start, g_hat, tol);
  WholeStepper stepper(m, cfg.variant, tol, cfg.refine_inverse);
  CorrectionData cd;
  QtMatrix e;
  if (cfg.mode == Mode::CorrectionOnly) {
    cd = prepare_correction(m, g_hat, cfg.variant, tol);
    e = add(x, cd.t, 1.0, -1.0, 0.0);
  }

  for (int k = 0;; ++k) {
    const double rt = tol / 10;
    const QtMatrix x2 = mul(x, x, rt);
    QtMatrix l = add(mul(m.A_1, x2, rt), mul(m.A_0, x, rt), 1.0, 1.0, rt);
    l = add(add(l, x, 1.0, -1.0, rt), m.A_m1, 1.0, 1.0, rt);
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
    if (cfg.mode == Mode::Whole) {
      if (cfg.variant == Variant::F1) {
        // F1(X) = L(X) + X
        x = add(l, x, 1.0, 1.0, tol);
      } else {
        x = stepper.step(x, x2);
      }
    } else {
      e = step_correction(m, e, cd, tol);
      x = add(cd.t, e, 1.0, 1.0, tol);
    }
  }
  rep.solution = compress(x, tol);
  if (cfg.h_norms && rep.rate_constants.drift_ok) fill_h_norms(m, rep.solution, tol, rep.rate_constants);
  return rep;
}

}  // namespace qtqme
