#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtqme/models.hpp"
#include "qtqme/qtmat.hpp"

namespace qtqme {

enum class Variant { F1, F2, F3 };
enum class Mode { Whole, CorrectionOnly };
enum class Start { Zero, Identity, ToeplitzOnly, ToeplitzStochastic };
enum class StopReason { Converged, MaxIterExceeded };

const char* to_string(Variant v);
const char* to_string(Mode m);
const char* to_string(Start s);
const char* to_string(StopReason r);
Variant parse_variant(const std::string& s);
Mode parse_mode(const std::string& s);
Start parse_start(const std::string& s);

// Called with (k, X_k) for every iterate, including X_0.
using IterateObserver = std::function<void(int, const QtMatrix&)>;

struct FpConfig {
  Variant variant = Variant::F3;
  Mode mode = Mode::Whole;
  Start start = Start::Zero;
  double eps_residual = 5e-14;
  int max_iter = 5000;
  double compress_tol = kIterTol;
  // Also compute |H_1|, |H_2|, |H_3| at the final iterate (costly for H_3).
  bool h_norms = false;
  // F3 only: refine the previous W^{-1} by Newton-Schulz steps instead of
  // summing a fresh Neumann series when the refinement certifies tol.
  bool refine_inverse = false;
  IterateObserver observer;
};

struct RateConstants {
  double theta = 0.0, gamma = 0.0, sigma = 0.0, tau = 0.0;
  bool drift_ok = false;       // interior and boundary drift hold
  bool interior_only = false;  // boundary drift fails; values are interior ones
  double h1 = -1.0, h2 = -1.0, h3 = -1.0;  // negative when not computed
};

RateConstants rate_constants(const QbdModel& m);

struct SolveReport {
  QtMatrix solution;
  std::vector<double> residuals;  // residuals[k] is the residual of X_k
  int iterations = 0;
  std::vector<std::pair<int, int>> correction_dims;
  StopReason stop_reason = StopReason::MaxIterExceeded;
  RateConstants rate_constants;
  std::vector<std::string> warnings;
  // Newton only.
  std::vector<double> step_norms;
  std::vector<double> backsub_residuals;
  std::vector<int> sylvester_terms;
  double max_positive_step_entry = 0.0;
};

// L(X) = A_1 X^2 + (A_0 - I) X + A_-1.
QtMatrix l_of(const QbdModel& m, const QtMatrix& x, double tol = kIterTol / 10);
double residual(const QbdModel& m, const QtMatrix& x);

QtMatrix make_start(const QbdModel& m, Start kind, const Laurent& g_hat, double compress_tol = kIterTol);

// (I - A_0 - A_1 X)^{-1}.
QtMatrix w_inverse(const QbdModel& m, const QtMatrix& x, double tol);

// Shared state of the whole-matrix iterations: F2 keeps (I - A_0)^{-1}; F3
// optionally keeps the previous W^{-1} for refinement.
class WholeStepper {
 public:
  WholeStepper(const QbdModel& m, Variant v, double tol, bool refine_inverse = false);
  QtMatrix step(const QtMatrix& x);
  // Step reusing X^2 (F1, F2) already formed by the caller.
  QtMatrix step(const QtMatrix& x, const QtMatrix& x2);

 private:
  QbdModel m_;
  Variant v_;
  double tol_;
  bool refine_;
  QtMatrix inv0_;
  std::optional<QtMatrix> winv_;
};

QtMatrix step_whole(const QbdModel& m, const QtMatrix& x, Variant v, double tol = kIterTol);

// Precomputed quantities of the correction recurrences for X = T(g) + E.
struct CorrectionData {
  Variant variant = Variant::F1;
  QtMatrix t;        // T(g)
  QtMatrix f;        // F1: A_1 T^2 + A_0 T + A_-1 - T
  QtMatrix s;        // F1: A_0 + A_1 T
  QtMatrix s_hat;    // F2: (I - A_0)^{-1} A_1
  QtMatrix s_tilde;  // F2: (I - A_0)^{-1}(A_1 T^2 + A_-1) - T
  QtMatrix v_hat;    // F3: (I - A_1 T - A_0)^{-1} A_1
  QtMatrix v_tilde;  // F3: (I - A_1 T - A_0)^{-1} A_-1 - T
};

CorrectionData prepare_correction(const QbdModel& m, const Laurent& g_hat, Variant v,
                                  double tol = kIterTol);
// E_{k+1} from E_k; E is any QT matrix with X = T(g) + E.
QtMatrix step_correction(const QbdModel& m, const QtMatrix& e, const CorrectionData& d,
                         double tol = kIterTol);

// g_hat is only needed for the Toeplitz starts and the correction mode.
SolveReport solve(const QbdModel& m, const FpConfig& cfg, const Laurent& g_hat = Laurent());

}  // namespace qtqme
