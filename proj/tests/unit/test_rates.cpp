#include <gtest/gtest.h>

#include <cmath>

#include "qtqme/fixedpoint.hpp"

using namespace qtqme;

namespace {

// Geometric residual reduction per step once the residual is below 1e-6.
double measured_rate(const std::vector<double>& res) {
  size_t j = 0;
  while (j < res.size() && res[j] > 1e-6) ++j;
  const size_t last = res.size() - 1;
  if (j >= last) return 0.0;
  return std::pow(res[last] / res[j], 1.0 / static_cast<double>(last - j));
}

}  // namespace

TEST(Rates, OrderingOnStudyCases) {
  for (int k = 1; k <= 10; ++k) {
    const QbdModel m = jackson_study_case(k);
    double rate[3];
    for (int v = 0; v < 3; ++v) {
      FpConfig cfg;
      cfg.variant = static_cast<Variant>(v);
      cfg.refine_inverse = true;
      const SolveReport r = solve(m, cfg);
      ASSERT_EQ(r.stop_reason, StopReason::Converged) << k;
      rate[v] = measured_rate(r.residuals);
      EXPECT_LE(rate[v], r.rate_constants.sigma + 1e-3) << k << " " << v;
    }
    EXPECT_LE(rate[2], rate[1] + 1e-3) << k;
    EXPECT_LE(rate[1], rate[0] + 1e-3) << k;
  }
}
