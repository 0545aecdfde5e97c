#include "qtqme/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qtqme/errors.hpp"
#include "qtqme/newton.hpp"

namespace qtqme {

ConditioningConstants constants(const QbdModel& m) {
  const double am1 = m.a_m1.sum(), a1 = m.a_1.sum();
  const double bm1 = m.b_m1.sum(), b1 = m.b_1.sum();
  if (!(am1 > a1) || !(bm1 > b1))
    throw Error(ErrorCode::DriftViolation, "A_-1 1 > A_1 1 does not hold");
  ConditioningConstants c;
  c.theta = std::min(am1, bm1);
  c.gamma = std::max(a1 / am1, b1 / bm1);
  c.sigma = 1.0 - std::min(am1 - a1, bm1 - b1);
  c.tau = std::min(c.gamma, c.sigma);
  return c;
}

double cond_upper(const QbdModel& m) {
  const ConditioningConstants c = constants(m);
  return 1.0 / (c.theta * (1.0 - c.gamma));
}

double toeplitz_cond(const QbdModel& m) {
  const double d = m.a_m1.sum() - m.a_1.sum();
  if (!(d > 0.0)) throw Error(ErrorCode::DriftViolation, "a_-1(1) > a_1(1) does not hold");
  return 1.0 / d;
}

double toeplitz_bound(const QbdModel& m, const Laurent& d_m1, const Laurent& d_0, const Laurent& d_1) {
  return toeplitz_cond(m) * (d_m1.wiener_norm() + d_0.wiener_norm() + d_1.wiener_norm());
}

Laurent first_order_delta_g(const QbdModel& m, const Laurent& d_m1, const Laurent& d_0,
                            const Laurent& d_1, const SymbolResult& sym) {
  toeplitz_cond(m);
  if (d_m1.is_zero() && d_0.is_zero() && d_1.is_zero()) return Laurent();
  const int n = std::max(sym.n, 4);
  const int pts = 2 * n;
  const auto g = sample_min_roots(m.a_m1, m.a_0, m.a_1, pts);
  const auto a0 = sample_roots_of_unity(m.a_0, pts);
  const auto a1 = sample_roots_of_unity(m.a_1, pts);
  const auto e_m1 = sample_roots_of_unity(d_m1, pts);
  const auto e_0 = sample_roots_of_unity(d_0, pts);
  const auto e_1 = sample_roots_of_unity(d_1, pts);
  std::vector<std::complex<double>> v(pts);
  for (int k = 0; k < pts; ++k) {
    const auto gk = g[k];
    v[k] = (e_1[k] * gk * gk + e_0[k] * gk + e_m1[k]) / (1.0 - 2.0 * a1[k] * gk - a0[k]);
  }
  return interpolate_roots_of_unity(v);
}

double cond_estimate(const QbdModel& m, const QtMatrix& g, double tol) {
  const QtMatrix b = add(m.A_0, mul(m.A_1, g, tol), 1.0, 1.0, tol);
  const QtMatrix winv = neumann_series(b, tol);
  const double s = inf_norm(mul(winv, m.A_1, tol));
  return inf_norm(winv) / (1.0 - s);
}

namespace {

void fill_constants(const QbdModel& m, ConditioningReport& r) {
  const ConditioningConstants c = constants(m);
  r.theta = c.theta;
  r.gamma = c.gamma;
  r.sigma = c.sigma;
  r.tau = c.tau;
  r.cond_upper = 1.0 / (c.theta * (1.0 - c.gamma));
  r.toeplitz_cond = toeplitz_cond(m);
}

SymbolResult symbol_at(const QbdModel& m, int n) {
  SymbolResult s;
  s.n = n;
  s.g_hat = interpolate_roots_of_unity(sample_min_roots(m.a_m1, m.a_0, m.a_1, 2 * n));
  return s;
}

}  // namespace

PreparedCase prepare_case(int case_number, double eps_residual) {
  PreparedCase pc;
  pc.case_number = case_number;
  pc.params = jackson_case(case_number);
  pc.model = jackson_study_case(case_number);
  pc.symbol = compute_symbol(pc.model, 1e-14);
  NewtonConfig cfg;
  cfg.eps_residual = eps_residual;
  const SolveReport rep = newton_solve(pc.model, cfg);
  if (rep.stop_reason != StopReason::Converged)
    throw Error(ErrorCode::MaxIterExceeded, "base solve did not converge");
  pc.g = rep.solution;
  pc.base.case_number = case_number;
  pc.base.flipped = pc.model.flipped;
  fill_constants(pc.model, pc.base);
  pc.base.cond_estimate = cond_estimate(pc.model, pc.g);
  return pc;
}

ConditioningReport perturb_run(const PreparedCase& pc, std::uint64_t seed, double eps_residual) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eps(1e-8, 2e-8);
  JacksonParams p = pc.params;
  p.lambda1 *= 1.0 + eps(rng);
  p.lambda2 *= 1.0 + eps(rng);
  p.mu1 *= 1.0 + eps(rng);
  p.mu2 *= 1.0 + eps(rng);
  const QbdModel& m = pc.model;
  const QbdModel mp = jackson(p, m.flipped);

  ConditioningReport r = pc.base;
  const Laurent d_m1 = add_exact(mp.a_m1, m.a_m1, 1.0, -1.0);
  const Laurent d_0 = add_exact(mp.a_0, m.a_0, 1.0, -1.0);
  const Laurent d_1 = add_exact(mp.a_1, m.a_1, 1.0, -1.0);
  r.delta_g_bound = toeplitz_bound(m, d_m1, d_0, d_1);
  r.delta_g_first_order = first_order_delta_g(m, d_m1, d_0, d_1, pc.symbol).wiener_norm();
  const SymbolResult sp = symbol_at(mp, pc.symbol.n);
  r.delta_g = add_exact(sp.g_hat, pc.symbol.g_hat, 1.0, -1.0).wiener_norm();

  const double dA = inf_norm(add(mp.A_m1, m.A_m1, 1.0, -1.0, 0.0)) +
                    inf_norm(add(mp.A_0, m.A_0, 1.0, -1.0, 0.0)) +
                    inf_norm(add(mp.A_1, m.A_1, 1.0, -1.0, 0.0));
  r.Delta_G_bound = r.cond_upper * dA;
  NewtonConfig cfg;
  cfg.eps_residual = eps_residual;
  cfg.warm_start = pc.g;
  const SolveReport rep = newton_solve(mp, cfg);
  if (rep.stop_reason != StopReason::Converged)
    throw Error(ErrorCode::MaxIterExceeded, "perturbed solve did not converge");
  r.Delta_G = inf_norm(add(rep.solution, pc.g, 1.0, -1.0, 0.0));
  return r;
}

ConditioningReport perturb_experiment(int case_number, std::uint64_t seed) {
  return perturb_run(prepare_case(case_number), seed);
}

}  // namespace qtqme
