#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "qtqme/errors.hpp"
#include "qtqme/fixedpoint.hpp"
#include "qtqme/symbolsolve.hpp"

using namespace qtqme;
using testutil::max_abs;

namespace {

struct Solved {
  QbdModel m;
  SymbolResult sym;
  QtMatrix g;
};

const Solved& solved(int k) {
  static std::map<int, Solved> cache;
  auto it = cache.find(k);
  if (it == cache.end()) {
    Solved s;
    s.m = jackson_study_case(k);
    s.sym = compute_symbol(s.m, 1e-14);
    FpConfig cfg;
    cfg.eps_residual = 1e-15;
    cfg.max_iter = 20000;
    cfg.variant = Variant::F2;
    cfg.start = Start::ToeplitzStochastic;
    s.g = solve(s.m, cfg, s.sym.g_hat).solution;
    it = cache.emplace(k, std::move(s)).first;
  }
  return it->second;
}

}  // namespace

TEST(FixedPoint, Parsing) {
  EXPECT_EQ(parse_variant("f2"), Variant::F2);
  EXPECT_EQ(parse_start("stochastic"), Start::ToeplitzStochastic);
  EXPECT_EQ(parse_mode("correction"), Mode::CorrectionOnly);
  EXPECT_STREQ(to_string(Start::ToeplitzOnly), "toeplitz");
  EXPECT_THROW(parse_variant("f4"), Error);
}

TEST(FixedPoint, ResidualAtZero) {
  const QbdModel m = jackson(1, false);
  EXPECT_DOUBLE_EQ(residual(m, QtMatrix::zero()), inf_norm(m.A_m1));
}

TEST(FixedPoint, ResidualAtSolution) {
  const Solved& s = solved(1);
  EXPECT_LE(residual(s.m, s.g), 5e-14);
}

TEST(FixedPoint, Starts) {
  const Solved& s = solved(5);
  EXPECT_EQ(inf_norm(make_start(s.m, Start::Zero, s.sym.g_hat)), 0.0);
  EXPECT_EQ(max_abs(window(make_start(s.m, Start::Identity, s.sym.g_hat), 5) - Eigen::MatrixXd::Identity(5, 5)), 0.0);
  const QtMatrix x0 = make_start(s.m, Start::ToeplitzStochastic, s.sym.g_hat);
  EXPECT_EQ(x0.cols(), 1);
  for (double d : row_sums_defect(x0, 50)) EXPECT_LE(std::abs(d), 1e-13);
  // No negative powers: nothing to add.
  const Laurent up(0, {0.5, 0.5});
  EXPECT_EQ(make_start(s.m, Start::ToeplitzStochastic, up).rows(), 0);
}

TEST(FixedPoint, F1FromZeroIsAm1) {
  const QbdModel m = jackson(7, false);
  const QtMatrix x1 = step_whole(m, QtMatrix::zero(), Variant::F1);
  EXPECT_EQ(max_abs(window(x1, 20) - window(m.A_m1, 20)), 0.0);
}

TEST(FixedPoint, SolutionIsFixed) {
  const Solved& s = solved(8);
  for (Variant v : {Variant::F1, Variant::F2, Variant::F3}) {
    const QtMatrix x = step_whole(s.m, s.g, v);
    EXPECT_LE(max_abs(window(x, 40) - window(s.g, 40)), 1e-12) << to_string(v);
  }
}

TEST(FixedPoint, RefinedInverseMatchesFresh) {
  const Solved& s = solved(8);
  FpConfig a, b;
  b.refine_inverse = true;
  const SolveReport ra = solve(s.m, a), rb = solve(s.m, b);
  EXPECT_EQ(ra.stop_reason, StopReason::Converged);
  EXPECT_EQ(rb.stop_reason, StopReason::Converged);
  EXPECT_LE(std::abs(ra.iterations - rb.iterations), 1);
  EXPECT_LE(max_abs(window(ra.solution, 30) - window(rb.solution, 30)), 1e-12);
}

TEST(FixedPoint, MonotoneFromZero) {
  const Solved& s = solved(5);
  const Eigen::MatrixXd gw = window(s.g, 20);
  for (Variant v : {Variant::F1, Variant::F2, Variant::F3}) {
    FpConfig cfg;
    cfg.variant = v;
    Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(20, 20);
    double worst_step = 0, worst_bound = 0;
    cfg.observer = [&](int, const QtMatrix& x) {
      const Eigen::MatrixXd w = window(x, 20);
      worst_step = std::max(worst_step, (prev - w).maxCoeff());
      worst_bound = std::max(worst_bound, (w - gw).maxCoeff());
      prev = w;
    };
    const SolveReport r = solve(s.m, cfg);
    EXPECT_EQ(r.stop_reason, StopReason::Converged);
    EXPECT_LE(worst_step, 1e-14) << to_string(v);
    EXPECT_LE(worst_bound, 1e-13) << to_string(v);
  }
}

TEST(FixedPoint, StochasticStartsKeepRowSums) {
  const Solved& s = solved(5);
  for (Start st : {Start::Identity, Start::ToeplitzStochastic}) {
    for (Variant v : {Variant::F1, Variant::F2, Variant::F3}) {
      FpConfig cfg;
      cfg.variant = v;
      cfg.start = st;
      double worst = 0;
      cfg.observer = [&](int, const QtMatrix& x) {
        for (double d : row_sums_defect(x, 60)) worst = std::max(worst, std::abs(d));
      };
      solve(s.m, cfg, s.sym.g_hat);
      EXPECT_LE(worst, 1e-12) << to_string(st) << " " << to_string(v);
    }
  }
}

TEST(FixedPoint, ErrorBoundF1) {
  const Solved& s = solved(1);
  const RateConstants rc = rate_constants(s.m);
  const double gn = inf_norm(s.g);
  FpConfig cfg;
  cfg.variant = Variant::F1;
  bool ok = true;
  cfg.observer = [&](int k, const QtMatrix& x) {
    const double err = inf_norm(add(s.g, x, 1, -1, 0));
    if (err > std::pow(rc.sigma, k) * gn + 1e-10) ok = false;
  };
  solve(s.m, cfg);
  EXPECT_TRUE(ok);
}

TEST(FixedPoint, RateConstantsCaseSeven) {
  const RateConstants rc = rate_constants(jackson(7, false));
  EXPECT_TRUE(rc.drift_ok);
  EXPECT_NEAR(rc.sigma, 1.0 - 1.0 / 30, 1e-14);
  EXPECT_NEAR(rc.gamma, 0.9, 1e-14);
  EXPECT_NEAR(rc.tau, 0.9, 1e-14);
  EXPECT_NEAR(rc.theta, 1.0 / 3, 1e-15);
}

TEST(FixedPoint, HNormsOrdered) {
  const Solved& s = solved(8);
  FpConfig cfg;
  cfg.h_norms = true;
  const SolveReport r = solve(s.m, cfg);
  const RateConstants& rc = r.rate_constants;
  EXPECT_LE(rc.h3, rc.h2 + 1e-12);
  EXPECT_LE(rc.h2, rc.h1 + 1e-12);
  EXPECT_LE(rc.h1, rc.sigma + 1e-12);
  EXPECT_LE(rc.h3, rc.tau + 1e-12);
}

TEST(FixedPoint, CorrectionRecurrenceAtZero) {
  const Solved& s = solved(8);
  const CorrectionData d = prepare_correction(s.m, s.sym.g_hat, Variant::F1);
  const QtMatrix e1 = step_correction(s.m, QtMatrix::zero(), d);
  EXPECT_LE(max_abs(window(e1, 40) - window(d.f, 40)), 1e-15);
}

TEST(FixedPoint, WholeAndCorrectionModesAgree) {
  const QbdModel m = jackson(7, false);
  const SymbolResult sym = compute_symbol(m, 1e-14);
  for (Variant v : {Variant::F1, Variant::F2, Variant::F3}) {
    std::vector<Eigen::MatrixXd> whole, corr;
    FpConfig cfg;
    cfg.variant = v;
    cfg.start = Start::ToeplitzOnly;
    cfg.max_iter = 10;
    cfg.observer = [&](int, const QtMatrix& x) { whole.push_back(window(x, 30)); };
    solve(m, cfg, sym.g_hat);
    cfg.mode = Mode::CorrectionOnly;
    cfg.observer = [&](int, const QtMatrix& x) { corr.push_back(window(x, 30)); };
    solve(m, cfg, sym.g_hat);
    ASSERT_EQ(whole.size(), corr.size());
    for (size_t k = 0; k < whole.size(); ++k)
      EXPECT_LE(max_abs(whole[k] - corr[k]), 1e-11) << to_string(v) << " step " << k;
  }
}

TEST(FixedPoint, CorrectionFixedPointF3) {
  const Solved& s = solved(8);
  const CorrectionData d = prepare_correction(s.m, s.sym.g_hat, Variant::F3);
  const QtMatrix eg = add(s.g, d.t, 1, -1, 0);
  const QtMatrix e1 = step_correction(s.m, eg, d);
  EXPECT_LE(max_abs(window(e1, 40) - window(eg, 40)), 1e-11);
}

TEST(FixedPoint, StepOrderingAllCases) {
  for (int k : {1, 5, 8, 9}) {
    const Solved& s = solved(k);
    for (Start st : {Start::Zero, Start::Identity, Start::ToeplitzOnly, Start::ToeplitzStochastic}) {
      int steps[3];
      for (int v = 0; v < 3; ++v) {
        FpConfig cfg;
        cfg.variant = static_cast<Variant>(v);
        cfg.start = st;
        const SolveReport r = solve(s.m, cfg, s.sym.g_hat);
        EXPECT_EQ(r.stop_reason, StopReason::Converged);
        EXPECT_LE(r.residuals.back(), 5e-14);
        steps[v] = r.iterations;
      }
      EXPECT_LE(steps[2], steps[1]) << k << " " << to_string(st);
      EXPECT_LE(steps[1], steps[0]) << k << " " << to_string(st);
    }
  }
}

TEST(FixedPoint, MaxIterIsAStopReason) {
  FpConfig cfg;
  cfg.max_iter = 3;
  const SolveReport r = solve(jackson(1, false), cfg);
  EXPECT_EQ(r.stop_reason, StopReason::MaxIterExceeded);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.residuals.size(), 4u);
}

TEST(FixedPoint, InvalidConfig) {
  FpConfig cfg;
  cfg.eps_residual = 0;
  EXPECT_THROW(solve(jackson(1, false), cfg), Error);
  FpConfig c2;
  c2.start = Start::ToeplitzOnly;
  EXPECT_THROW(solve(jackson(1, false), c2), Error);
}

TEST(FixedPoint, DualSolutionsOfTheQuarterPlaneWalk) {
  const QbdModel m = rwqp_example();
  const SymbolResult sym = compute_symbol(m, 1e-14);
  FpConfig cfg;
  cfg.variant = Variant::F3;
  cfg.start = Start::Identity;
  const SolveReport gh = solve(m, cfg, sym.g_hat);
  ASSERT_EQ(gh.stop_reason, StopReason::Converged);
  EXPECT_FALSE(gh.warnings.empty());
  EXPECT_TRUE(gh.rate_constants.interior_only);
  double dhmax = 0;
  for (double d : row_sums_defect(gh.solution, 10)) dhmax = std::max(dhmax, std::abs(d));
  EXPECT_LE(dhmax, 1e-12);

  // The walk has zero mean vertical drift (the phase process spends 1/3 of its
  // time at phase 0 with drift +2/3, elsewhere -1/3). From zero the iterates
  // creep up with error ~ 1/k and residual ~ 1/k^2.
  cfg.variant = Variant::F1;
  cfg.start = Start::Zero;
  cfg.max_iter = 8000;
  const Eigen::MatrixXd ghw = window(gh.solution, 20);
  double excess = -1, defect_half = 0;
  cfg.observer = [&](int k, const QtMatrix& x) {
    excess = std::max(excess, (window(x, 20) - ghw).maxCoeff());
    if (k == 4000) defect_half = row_sums_defect(x, 1)[0];
  };
  const SolveReport g = solve(m, cfg, sym.g_hat);
  EXPECT_EQ(g.stop_reason, StopReason::MaxIterExceeded);
  const double ratio = g.residuals[4000] / g.residuals[8000];
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
  const double dratio = defect_half / row_sums_defect(g.solution, 1)[0];
  EXPECT_GT(dratio, 1.8);
  EXPECT_LT(dratio, 2.2);
  EXPECT_LE(excess, 1e-12);
}

TEST(FixedPoint, HeavyJacksonNetwork) {
  const QbdModel m = jackson(JacksonParams{5, 0.7, 2, 2, 0.5, 0.5}, false);
  const SymbolResult sym = compute_symbol(m, 1e-14);
  EXPECT_GT(sym.g_hat.pos_extent(), 5000);
  FpConfig cfg;
  cfg.variant = Variant::F2;
  cfg.start = Start::ToeplitzStochastic;
  const SolveReport r = solve(m, cfg, sym.g_hat);
  EXPECT_EQ(r.stop_reason, StopReason::Converged);
  EXPECT_GT(r.solution.cols(), 5000);
}
