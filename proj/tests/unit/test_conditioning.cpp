#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "qtqme/conditioning.hpp"
#include "qtqme/errors.hpp"

using namespace qtqme;

namespace {

const double kTable[10] = {9.0, 4.5, 4.5, 9.0, 7.5, 7.5, 30.0, 5.5, 5.1667, 5.1667};

JacksonParams scaled(JacksonParams p, double e) {
  p.lambda1 *= 1 + e;
  p.lambda2 *= 1 - 0.5 * e;
  p.mu1 *= 1 + 0.3 * e;
  p.mu2 *= 1 - e;
  return p;
}

}  // namespace

TEST(Conditioning, CaseOneConstants) {
  const ConditioningConstants c = constants(jackson(1, false));
  EXPECT_NEAR(c.theta, 2.0 / 4.5, 1e-15);
  EXPECT_NEAR(c.gamma, 0.75, 1e-15);
  EXPECT_NEAR(cond_upper(jackson(1, false)), 9.0, 1e-12);
}

TEST(Conditioning, CaseSevenConstants) {
  const QbdModel m = jackson(7, false);
  const ConditioningConstants c = constants(m);
  EXPECT_NEAR(cond_upper(m), 30.0, 1e-12);
  EXPECT_NEAR(c.sigma, 0.9667, 5e-5);
  EXPECT_NEAR(c.tau, 0.9, 1e-14);
  EXPECT_NEAR(toeplitz_cond(m), 30.0, 1e-12);
}

TEST(Conditioning, StudyTable) {
  for (int k = 1; k <= 10; ++k)
    EXPECT_NEAR(cond_upper(jackson_study_case(k)), kTable[k - 1], 5e-4) << k;
}

TEST(Conditioning, DriftViolation) {
  try {
    constants(jackson(2, false));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DriftViolation);
  }
}

TEST(Conditioning, ToeplitzCoincidence) {
  // cond_upper == toeplitz_cond exactly when a_-1(1) <= b_-1(1) and
  // a_-1(1) / b_-1(1) <= a_1(1) / b_1(1).
  std::vector<QbdModel> models;
  for (int k = 1; k <= 10; ++k) models.push_back(jackson_study_case(k));
  models.push_back(rwqp({{{0.05, 0.05, 0.05}, {0.1, 0.1, 0.1}, {0.2, 0.15, 0.2}}},
                        {{{0.1, 0.1}, {0.2, 0.2}, {0.2, 0.2}}}));
  models.push_back(rwqp({{{0.05, 0.05, 0.05}, {0.1, 0.1, 0.1}, {0.2, 0.15, 0.2}}},
                        {{{0.05, 0.05}, {0.2, 0.2}, {0.25, 0.25}}}));
  int coincide = 0, differ = 0;
  for (const QbdModel& m : models) {
    const double am1 = m.a_m1.sum(), a1 = m.a_1.sum(), bm1 = m.b_m1.sum(), b1 = m.b_1.sum();
    const bool cond = am1 <= bm1 && am1 * b1 <= a1 * bm1;
    const bool equal = std::abs(cond_upper(m) - toeplitz_cond(m)) <= 1e-12 * toeplitz_cond(m);
    EXPECT_EQ(cond, equal) << m.family << " " << am1 << " " << bm1;
    (equal ? coincide : differ)++;
  }
  EXPECT_GT(coincide, 0);
  EXPECT_GT(differ, 0);
}

TEST(Conditioning, ZeroPerturbation) {
  const QbdModel m = jackson(7, false);
  EXPECT_EQ(toeplitz_bound(m, Laurent(), Laurent(), Laurent()), 0.0);
  SymbolResult sym;
  sym.n = 8;
  EXPECT_TRUE(first_order_delta_g(m, Laurent(), Laurent(), Laurent(), sym).is_zero());
}

TEST(Conditioning, FirstOrderWithinBound) {
  for (int k : {1, 5, 8}) {
    const JacksonParams p = jackson_case(k);
    const QbdModel m = jackson(p, false);
    const QbdModel mp = jackson(scaled(p, 1e-8), false);
    const SymbolResult sym = compute_symbol(m, 1e-14);
    const Laurent d_m1 = add_exact(mp.a_m1, m.a_m1, 1, -1);
    const Laurent d_0 = add_exact(mp.a_0, m.a_0, 1, -1);
    const Laurent d_1 = add_exact(mp.a_1, m.a_1, 1, -1);
    const double dg = first_order_delta_g(m, d_m1, d_0, d_1, sym).wiener_norm();
    EXPECT_GT(dg, 0.0);
    EXPECT_LE(dg, 1.1 * toeplitz_bound(m, d_m1, d_0, d_1)) << k;
  }
}

TEST(Conditioning, FirstOrderIsSecondOrderAccurate) {
  const JacksonParams p = jackson_case(5);
  const QbdModel m = jackson(p, false);
  const SymbolResult sym = compute_symbol(m, 1e-14);
  const int pts = 2 * sym.n;
  std::vector<double> errs;
  for (double e : {4e-3, 2e-3, 1e-3}) {
    const QbdModel mp = jackson(scaled(p, e), false);
    const Laurent gp = interpolate_roots_of_unity(sample_min_roots(mp.a_m1, mp.a_0, mp.a_1, pts));
    const Laurent dg = first_order_delta_g(m, add_exact(mp.a_m1, m.a_m1, 1, -1),
                                           add_exact(mp.a_0, m.a_0, 1, -1),
                                           add_exact(mp.a_1, m.a_1, 1, -1), sym);
    errs.push_back(add_exact(add_exact(gp, sym.g_hat, 1, -1), dg, 1, -1).wiener_norm());
  }
  for (size_t i = 1; i < errs.size(); ++i) EXPECT_GE(std::log2(errs[i - 1] / errs[i]), 1.9);
}

TEST(Conditioning, EstimateBelowUpperBound) {
  for (int k = 1; k <= 10; ++k) {
    if (k == 7) continue;  // covered by the acceptance run
    const PreparedCase pc = prepare_case(k);
    EXPECT_LE(pc.base.cond_estimate, pc.base.cond_upper * (1 + 1e-10)) << k;
    EXPECT_GT(pc.base.cond_estimate, 0.0);
  }
}

TEST(Conditioning, PerturbationRunsRespectBounds) {
  for (int k : {1, 2, 5, 8}) {
    const PreparedCase pc = prepare_case(k);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const ConditioningReport r = perturb_run(pc, seed);
      EXPECT_LE(r.delta_g, 1.1 * r.delta_g_bound) << k;
      EXPECT_LE(r.Delta_G, 1.1 * r.Delta_G_bound) << k;
      EXPECT_GT(r.delta_g, 1e-11) << k;
      EXPECT_LT(r.delta_g, 1e-7) << k;
      EXPECT_EQ(r.flipped, k == 2);
    }
    // Same seed, same numbers.
    const ConditioningReport a = perturb_run(pc, 42), b = perturb_run(pc, 42);
    EXPECT_EQ(a.delta_g, b.delta_g);
    EXPECT_EQ(a.Delta_G, b.Delta_G);
  }
}
