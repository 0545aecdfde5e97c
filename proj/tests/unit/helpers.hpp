#pragma once

#include <Eigen/Dense>
#include <random>

#include "qtqme/qtmat.hpp"

namespace testutil {

inline qtqme::Laurent random_symbol(std::mt19937_64& rng, int lo, int len, double lo_val = -1.0) {
  std::uniform_real_distribution<double> u(lo_val, 1.0);
  std::vector<double> c(len);
  for (auto& x : c) x = u(rng);
  return qtqme::Laurent(lo, c);
}

inline qtqme::QtMatrix random_qt(std::mt19937_64& rng, int lo, int len, int r, int c,
                                 double lo_val = -1.0) {
  std::uniform_real_distribution<double> u(lo_val, 1.0);
  Eigen::MatrixXd e(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) e(i, j) = u(rng);
  return qtqme::QtMatrix(random_symbol(rng, lo, len, lo_val), e);
}

inline double inf_norm(const Eigen::MatrixXd& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace testutil
