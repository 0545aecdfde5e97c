#include "qtqme/symbolsolve.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qtqme/errors.hpp"

namespace qtqme {

std::complex<double> min_modulus_root(std::complex<double> am1, std::complex<double> a0,
                                      std::complex<double> a1, double tol) {
  const std::complex<double> b = a0 - 1.0;
  if (std::abs(a1) < 1e-300) {
    if (std::abs(b) < 1e-300)
      throw Error(ErrorCode::DegenerateEquation, "a1 and a0 - 1 both vanish");
    return -am1 / b;
  }
  const std::complex<double> sq = std::sqrt(b * b - 4.0 * a1 * am1);
  const std::complex<double> d1 = -b + sq;
  const std::complex<double> d2 = -b - sq;
  const double n1 = std::abs(d1), n2 = std::abs(d2);
  const double nmax = std::max(n1, n2);
  if (nmax == 0.0) return 0.0;  // b = 0 and am1 = 0: double root at zero
  // x = 2 am1 / d; the larger |d| gives the smaller root.
  if (std::abs(n1 - n2) <= tol * nmax) {
    const std::complex<double> x1 = 2.0 * am1 / d1;
    const std::complex<double> x2 = 2.0 * am1 / d2;
    const double g1 = std::abs(std::arg(x1)), g2 = std::abs(std::arg(x2));
    if (g1 != g2) return g1 < g2 ? x1 : x2;
    return std::arg(x1) <= std::arg(x2) ? x1 : x2;
  }
  return 2.0 * am1 / (n1 >= n2 ? d1 : d2);
}

DerivativesAtOne derivatives_at_one(const Laurent& am1, const Laurent& a0, const Laurent& a1) {
  const double m1 = am1.sum(), z0 = a0.sum(), p1 = a1.sum();
  DerivativesAtOne d;
  d.g1 = p1 > 0.0 ? std::min(1.0, m1 / p1) : 1.0;
  const double den = 1.0 - 2.0 * p1 * d.g1 - z0;
  if (den <= 1e-14)
    throw Error(ErrorCode::NullDrift, "1 - 2 a1(1) g(1) - a0(1) = " + std::to_string(den));
  const double dm1 = am1.derivative(1).sum(), d0 = a0.derivative(1).sum(), dp1 = a1.derivative(1).sum();
  const double sm1 = am1.derivative(2).sum(), s0 = a0.derivative(2).sum(), sp1 = a1.derivative(2).sum();
  const double g = d.g1;
  d.gp1 = (dp1 * g * g + d0 * g + dm1) / den;
  d.gpp1 = (sm1 + s0 * g + sp1 * g * g + 2.0 * p1 * d.gp1 * d.gp1 + 2.0 * d.gp1 * (2.0 * g * dp1 + d0)) / den;
  return d;
}

DerivativesAtOne derivatives_at_one(const QbdModel& model) {
  return derivatives_at_one(model.a_m1, model.a_0, model.a_1);
}

std::vector<std::complex<double>> sample_min_roots(const Laurent& am1, const Laurent& a0,
                                                   const Laurent& a1, int m) {
  std::vector<std::complex<double>> lam(m);
  for (int i = 0; i < m; ++i) {
    const std::complex<double> z = std::polar(1.0, 2.0 * std::numbers::pi * i / m);
    lam[i] = min_modulus_root(am1.eval(z), a0.eval(z), a1.eval(z));
  }
  return lam;
}

SymbolResult compute_symbol(const Laurent& am1, const Laurent& a0, const Laurent& a1, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "eps must be positive");
  const DerivativesAtOne d = derivatives_at_one(am1, a0, a1);
  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  SymbolResult r;
  r.g1 = d.g1;
  r.gp1 = d.gp1;
  r.gpp1 = d.gpp1;
  for (int n = 4;; n *= 2) {
    if (n > kMaxSymbolHalfPoints)
      throw Error(ErrorCode::MaxPointsExceeded, "n would exceed 2^22");
    const int m = 2 * n;
    const auto lam = sample_min_roots(am1, a0, a1, m);
    Laurent gh = interpolate_roots_of_unity(lam);
    double gpp_hat = 0.0, weight2 = 0.0, vmax = 0.0;
    for (int j = gh.lo(); j <= gh.hi(); ++j) gpp_hat += static_cast<double>(j) * (j - 1) * gh[j];
    for (int j = -n + 1; j <= n; ++j) {
      const double w = static_cast<double>(j) * (j - 1);
      weight2 += w * w;
    }
    for (const auto& v : lam) vmax = std::max(vmax, std::abs(v));
    // Rounding in the transform perturbs each coefficient by about u max|lambda|,
    // which moves g_hat''(1) by up to this much; below it delta_m is noise.
    const double floor = 8.0 * u * std::sqrt(weight2) * vmax;
    const double raw = d.gpp1 - gpp_hat;
    double delta = std::max(raw, 0.0);
    if (delta <= floor) delta = 0.0;
    r.g_hat = std::move(gh);
    r.n = n;
    r.delta_raw = raw;
    r.delta_floor = floor;
    r.delta_m = delta;
    ++r.stages;
    if (delta / m <= eps) break;
  }
  return r;
}

SymbolResult compute_symbol(const QbdModel& model, double eps) {
  return compute_symbol(model.a_m1, model.a_0, model.a_1, eps);
}

}  // namespace qtqme
