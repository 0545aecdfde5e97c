#pragma once

#include <cstdint>

#include "qtqme/models.hpp"
#include "qtqme/qtmat.hpp"
#include "qtqme/symbolsolve.hpp"

namespace qtqme {

struct ConditioningConstants {
  double theta = 0.0, gamma = 0.0, sigma = 0.0, tau = 0.0;
};

// theta = min(a_-1(1), b_-1(1)), gamma = max(a_1(1)/a_-1(1), b_1(1)/b_-1(1)),
// sigma = 1 - min(a_-1(1) - a_1(1), b_-1(1) - b_1(1)), tau = min(gamma, sigma).
// Throws DriftViolation unless A_-1 1 > A_1 1.
ConditioningConstants constants(const QbdModel& m);

// 1 / (theta (1 - gamma)).
double cond_upper(const QbdModel& m);
// 1 / (a_-1(1) - a_1(1)).
double toeplitz_cond(const QbdModel& m);

// Bound on |delta_g|_w for symbol perturbations d_i of a_i.
double toeplitz_bound(const QbdModel& m, const Laurent& d_m1, const Laurent& d_0, const Laurent& d_1);

// (d_1 g^2 + d_0 g + d_-1) / (1 - 2 a_1 g - a_0) sampled at the 2 sym.n roots
// of unity used for sym.g_hat.
Laurent first_order_delta_g(const QbdModel& m, const Laurent& d_m1, const Laurent& d_0,
                            const Laurent& d_1, const SymbolResult& sym);

// |W^{-1}| / (1 - |W^{-1} A_1|) with W = I - A_0 - A_1 G.
double cond_estimate(const QbdModel& m, const QtMatrix& g, double tol = kIterTol);

struct ConditioningReport {
  int case_number = 0;
  bool flipped = false;
  double theta = 0.0, gamma = 0.0, sigma = 0.0, tau = 0.0;
  double cond_upper = 0.0;
  double toeplitz_cond = 0.0;
  double cond_estimate = 0.0;
  // Filled by the perturbation experiment; negative otherwise.
  double delta_g = -1.0, delta_g_bound = -1.0, delta_g_first_order = -1.0;
  double Delta_G = -1.0, Delta_G_bound = -1.0;
};

// Base data shared by repeated perturbation runs of one study case.
struct PreparedCase {
  int case_number = 0;
  JacksonParams params;
  QbdModel model;
  SymbolResult symbol;
  QtMatrix g;
  ConditioningReport base;
};

PreparedCase prepare_case(int case_number, double eps_residual = 5e-14);

// Multiplies lambda_i, mu_i by 1 + e with e uniform in [1e-8, 2e-8], re-solves
// the symbol (at the base point count) and G (Newton from the base G), and
// measures |delta_g|_w and |Delta_G|_inf against their bounds.
ConditioningReport perturb_run(const PreparedCase& pc, std::uint64_t seed,
                               double eps_residual = 5e-14);
ConditioningReport perturb_experiment(int case_number, std::uint64_t seed);

}  // namespace qtqme
