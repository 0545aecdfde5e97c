#pragma once

#include <optional>

#include "qtqme/fixedpoint.hpp"

namespace qtqme {

struct NewtonConfig {
  double eps_residual = 5e-14;
  int max_iter = 50;
  // Non-positive means eps_residual / 100.
  double sylvester_tol = 0.0;
  std::optional<QtMatrix> warm_start;
  double compress_tol = kIterTol;
  IterateObserver observer;
};

struct SylvesterInfo {
  double s_norm = 0.0;
  double x_norm = 0.0;
  int terms = 0;
  int block = 1;  // p in the tail bound
  double truncation_bound = 0.0;
  double backsub_residual = 0.0;
};

inline constexpr int kMaxSylvesterBlock = 64;

// Z = -sum_i S^i V X^i with S = W^{-1} A_1, V = W^{-1} rhs, W = I - A_0 - A_1 X,
// which solves (A_1 X + A_0 - I) Z + A_1 Z X = rhs.
QtMatrix sylvester_series(const QbdModel& m, const QtMatrix& x, const QtMatrix& rhs, double tol,
                          SylvesterInfo* info = nullptr);

// X_{k+1} = X_k - Z_k with Z_k from sylvester_series(rhs = L(X_k)).
SolveReport newton_solve(const QbdModel& m, const NewtonConfig& cfg = NewtonConfig());

}  // namespace qtqme
