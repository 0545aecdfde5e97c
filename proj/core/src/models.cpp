#include "qtqme/models.hpp"

#include <algorithm>
#include <cmath>

#include "qtqme/errors.hpp"

namespace qtqme {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

// First row of A as a power series in z.
Laurent first_row(const QtMatrix& a) {
  const int width = std::max(a.cols(), a.symbol().hi() + 1);
  std::vector<double> c(std::max(width, 0));
  for (int j = 0; j < width; ++j) c[j] = a.entry(0, j);
  return Laurent(0, std::move(c));
}

QtMatrix stencil(double m1, double c0, double p1, double corr00 = 0.0) {
  Correction e;
  if (corr00 != 0.0) e = Correction::Constant(1, 1, corr00);
  return QtMatrix(Laurent(-1, {m1, c0, p1}), e);
}

}  // namespace

JacksonParams jackson_case(int k) {
  static const JacksonParams table[10] = {
      {1, 0, 1.5, 2, 1, 0},   {1, 0, 2, 1.5, 1, 0},     {0, 1, 1.5, 2, 0, 1},
      {0, 1, 2, 1.5, 0, 1},   {1, 1, 2, 2, 0.1, 0.8},   {1, 1, 2, 2, 0.8, 0.1},
      {1, 1, 2, 2, 0.4, 0.4}, {1, 1, 10, 10, 0.5, 0.5}, {1, 5, 10, 15, 0.4, 0.9},
      {5, 1, 15, 10, 0.9, 0.4},
  };
  require(k >= 1 && k <= 10, "Jackson case must be in 1..10");
  return table[k - 1];
}

bool jackson_case_needs_flip(int k) { return k == 2 || k == 6 || k == 10; }

QbdModel make_model(QtMatrix a_m1, QtMatrix a_0, QtMatrix a_1, std::string family) {
  QbdModel m;
  m.a_m1 = a_m1.symbol();
  m.a_0 = a_0.symbol();
  m.a_1 = a_1.symbol();
  m.b_m1 = first_row(a_m1);
  m.b_0 = first_row(a_0);
  m.b_1 = first_row(a_1);
  m.A_m1 = std::move(a_m1);
  m.A_0 = std::move(a_0);
  m.A_1 = std::move(a_1);
  m.family = std::move(family);
  return m;
}

QbdModel jackson(const JacksonParams& prm, bool flipped) {
  const auto [l1, l2, m1, m2, p, q] = prm;
  require(l1 >= 0 && l2 >= 0 && m1 >= 0 && m2 >= 0, "rates must be nonnegative");
  require(p >= 0 && p <= 1 && q >= 0 && q <= 1, "routing probabilities must lie in [0, 1]");
  const double total = l1 + l2 + m1 + m2;
  require(total > 0, "at least one rate must be positive");
  const double alpha = 1.0 / total;
  QtMatrix am1, a0, a1;
  if (!flipped) {
    am1 = stencil(0.0, alpha * (1 - q) * m2, alpha * q * m2);
    a1 = stencil(alpha * p * m1, alpha * l2, 0.0);
    // Uniformising at rate l1 + l2 + m1 + m2 leaves a zero interior diagonal;
    // the first row diagonal is alpha m1.
    a0 = stencil(alpha * (1 - p) * m1, 0.0, alpha * l1, alpha * m1);
  } else {
    am1 = stencil(0.0, alpha * (1 - p) * m1, alpha * p * m1);
    a1 = stencil(alpha * q * m2, alpha * l1, 0.0);
    a0 = stencil(alpha * (1 - q) * m2, 0.0, alpha * l2, alpha * m2);
  }
  QbdModel m = make_model(std::move(am1), std::move(a0), std::move(a1), "jackson");
  m.jackson = prm;
  m.flipped = flipped;
  return m;
}

QbdModel jackson(int case_number, bool flipped) { return jackson(jackson_case(case_number), flipped); }

QbdModel jackson_study_case(int k) { return jackson(jackson_case(k), jackson_case_needs_flip(k)); }

QbdModel idle_server(double l1, double l2, double m1, double m2) {
  require(l1 >= 0 && l2 >= 0 && m1 > 0 && m2 > 0, "idle server needs positive service rates");
  if (!(l1 / m1 + l2 / m2 < 2.0))
    throw Error(ErrorCode::ErgodicityViolation, "rho1 + rho2 must be < 2");
  // Boundary diagonal magnitude is l1 + l2 + 2 m1, interior l1 + l2 + m1 + m2.
  const double rate = std::max(l1 + l2 + 2 * m1, l1 + l2 + m1 + m2);
  const double alpha = 1.0 / rate;
  QtMatrix am1 = stencil(0.0, alpha * m1, 0.0, alpha * m1);
  QtMatrix a0 =
      stencil(alpha * m2, alpha * (rate - (l1 + l2 + m1 + m2)), alpha * l2, alpha * (m2 - m1));
  QtMatrix a1 = stencil(0.0, alpha * l1, 0.0);
  return make_model(std::move(am1), std::move(a0), std::move(a1), "idle");
}

QbdModel rwqp(const Stencil3& h, const Stencil32& y) {
  double sh = 0.0, sy = 0.0;
  for (const auto& row : h)
    for (double v : row) {
      require(v >= 0, "stencil entries must be nonnegative");
      sh += v;
    }
  for (const auto& row : y)
    for (double v : row) {
      require(v >= 0, "stencil entries must be nonnegative");
      sy += v;
    }
  require(std::abs(sh - 1.0) <= 1e-12, "H must sum to 1");
  require(std::abs(sy - 1.0) <= 1e-12, "Y must sum to 1");
  // row r of the stencils is level step i = 1 - r
  auto block = [&](int r) {
    Correction e(1, 2);
    e(0, 0) = y[r][0] - h[r][1];
    e(0, 1) = y[r][1] - h[r][2];
    return QtMatrix(Laurent(-1, {h[r][0], h[r][1], h[r][2]}), e);
  };
  return make_model(block(2), block(1), block(0), "rwqp");
}

QbdModel rwqp_example() {
  const Stencil3 h = {{{1.0 / 9, 0.0, 1.0 / 9}, {2.0 / 9, 0.0, 0.0}, {2.0 / 9, 2.0 / 9, 1.0 / 9}}};
  const Stencil32 y = {{{1.0 / 3, 1.0 / 3}, {0.0, 1.0 / 3}, {0.0, 0.0}}};
  return rwqp(h, y);
}

DriftReport drift_check(const QbdModel& m) {
  DriftReport r;
  r.interior_ok = m.a_m1.sum() > m.a_1.sum();
  r.boundary_ok = m.b_m1.sum() > m.b_1.sum();
  if ((!r.interior_ok || !r.boundary_ok) && m.jackson) {
    const QbdModel other = jackson(*m.jackson, !m.flipped);
    r.flipped_recommended =
        other.a_m1.sum() > other.a_1.sum() && other.b_m1.sum() > other.b_1.sum();
  }
  return r;
}

ModelCheck check_model(const QbdModel& m, int k) {
  ModelCheck c;
  const QtMatrix* blocks[3] = {&m.A_m1, &m.A_0, &m.A_1};
  int width = k + 2;
  for (const QtMatrix* b : blocks) width = std::max({width, b->cols(), b->symbol().hi() + k + 1});
  for (int i = 0; i < k; ++i) {
    double s = 0.0;
    for (const QtMatrix* b : blocks)
      for (int j = 0; j < width; ++j) {
        const double v = b->entry(i, j);
        s += v;
        c.min_entry = std::min(c.min_entry, v);
      }
    c.max_defect = std::max(c.max_defect, std::abs(1.0 - s));
  }
  return c;
}

}  // namespace qtqme
