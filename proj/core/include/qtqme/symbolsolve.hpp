#pragma once

#include <complex>

#include "qtqme/laurent.hpp"
#include "qtqme/models.hpp"

namespace qtqme {

struct SymbolResult {
  Laurent g_hat;
  int n = 0;               // half the number of interpolation points
  double delta_m = 0.0;    // g''(1) - g_hat''(1), clamped, used by the stop test
  double delta_raw = 0.0;  // unclamped difference
  double delta_floor = 0.0;
  double g1 = 0.0, gp1 = 0.0, gpp1 = 0.0;
  int stages = 0;
};

// Root of smallest modulus of a1 x^2 + (a0 - 1) x + am1 = 0. Ties within
// relative tol go to the root with smaller |arg|.
std::complex<double> min_modulus_root(std::complex<double> am1, std::complex<double> a0,
                                      std::complex<double> a1, double tol = 1e-10);

struct DerivativesAtOne {
  double g1 = 0.0, gp1 = 0.0, gpp1 = 0.0;
};
DerivativesAtOne derivatives_at_one(const Laurent& am1, const Laurent& a0, const Laurent& a1);
DerivativesAtOne derivatives_at_one(const QbdModel& model);

inline constexpr int kMaxSymbolHalfPoints = 1 << 22;

// Evaluation and interpolation at m = 2n roots of unity with n doubling from 4
// until delta_m / m <= eps.
SymbolResult compute_symbol(const Laurent& am1, const Laurent& a0, const Laurent& a1, double eps);
SymbolResult compute_symbol(const QbdModel& model, double eps);

// Roots at the m-th roots of unity, shared with the perturbation code.
std::vector<std::complex<double>> sample_min_roots(const Laurent& am1, const Laurent& a0,
                                                   const Laurent& a1, int m);

}  // namespace qtqme
