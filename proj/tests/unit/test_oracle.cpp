#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracle.hpp"
#include "qtqme/errors.hpp"
#include "qtqme/fixedpoint.hpp"
#include "qtqme/symbolsolve.hpp"

using namespace qtqme;
using testutil::max_abs;

TEST(Oracle, TruncationIsTheWindow) {
  const QbdModel m = jackson(7, false);
  const oracle::TruncatedModel tm = oracle::truncate(m, 60);
  EXPECT_EQ(tm.A_m1, window(m.A_m1, 60));
  EXPECT_EQ(tm.A_0, window(m.A_0, 60));
  EXPECT_EQ(tm.A_1, window(m.A_1, 60));
  const Eigen::MatrixXd s = tm.A_m1 + tm.A_0 + tm.A_1;
  for (int i = 0; i < 59; ++i) EXPECT_NEAR(s.row(i).sum(), 1.0, 1e-15);
  EXPECT_LT(s.row(59).sum(), 1.0);
  const oracle::TruncatedModel big = oracle::truncate(m, 120);
  EXPECT_EQ(big.A_0.topLeftCorner(20, 20), tm.A_0.topLeftCorner(20, 20));
}

TEST(Oracle, TooSmall) {
  try {
    oracle::truncate(jackson(7, false), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
  }
}

TEST(Oracle, ScalarEquation) {
  oracle::TruncatedModel tm;
  tm.N = 1;
  tm.A_m1 = Eigen::MatrixXd::Constant(1, 1, 0.2);
  tm.A_0 = Eigen::MatrixXd::Constant(1, 1, 0.3);
  tm.A_1 = Eigen::MatrixXd::Constant(1, 1, 0.4);
  const oracle::DenseResult r = oracle::dense_solve(tm, 1e-15, 1000);
  EXPECT_NEAR(r.G(0, 0), std::real(min_modulus_root(0.2, 0.3, 0.4)), 1e-14);
  EXPECT_NEAR(r.G(0, 0), (0.7 - std::sqrt(0.17)) / 0.8, 1e-14);
  EXPECT_LE(r.residual, 1e-15);
}

TEST(Oracle, MaxIter) {
  const oracle::TruncatedModel tm = oracle::truncate(jackson(1, false), 100);
  try {
    oracle::dense_solve(tm, 1e-15, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MaxIterExceeded);
  }
}

TEST(Oracle, AgreesWithQtSolver) {
  const QbdModel m = jackson(8, false);
  const oracle::DenseResult a = oracle::dense_solve(oracle::truncate(m, 400), 1e-13, 2000);
  const oracle::DenseResult b = oracle::dense_solve(oracle::truncate(m, 800), 1e-13, 2000);
  const Eigen::MatrixXd wa = a.G.topLeftCorner(20, 20), wb = b.G.topLeftCorner(20, 20);
  ASSERT_LE(max_abs(wa - wb), 1e-9);
  // Truncation under-approximates.
  EXPECT_LE((wa - wb).maxCoeff(), 1e-14);
  const SolveReport r = solve(m, FpConfig());
  EXPECT_LE(max_abs(window(r.solution, 20) - wb), 1e-8);
  // The QT residual on the window agrees with the dense one.
  const int n = 800;
  const Eigen::MatrixXd X = window(r.solution, n);
  const Eigen::MatrixXd L = oracle::truncate(m, n).A_1 * X * X + (window(m.A_0, n) - Eigen::MatrixXd::Identity(n, n)) * X + window(m.A_m1, n);
  EXPECT_LE(max_abs(L.topLeftCorner(20, 20) - window(l_of(m, r.solution), 20)), 1e-10);
}
