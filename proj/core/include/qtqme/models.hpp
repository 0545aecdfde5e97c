#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "qtqme/laurent.hpp"
#include "qtqme/qtmat.hpp"

namespace qtqme {

struct JacksonParams {
  double lambda1 = 0, lambda2 = 0, mu1 = 0, mu2 = 0, p = 0, q = 0;
};

// The ten parameter sets of the two-node Jackson network study (cases 1..10).
JacksonParams jackson_case(int k);
// Cases whose drift condition only holds after exchanging levels and phases.
bool jackson_case_needs_flip(int k);

struct QbdModel {
  QtMatrix A_m1, A_0, A_1;
  // Interior symbols a_i and boundary (first row) symbols b_i.
  Laurent a_m1, a_0, a_1;
  Laurent b_m1, b_0, b_1;
  std::string family;
  std::optional<JacksonParams> jackson;
  bool flipped = false;
};

struct DriftReport {
  bool interior_ok = false;
  bool boundary_ok = false;
  bool flipped_recommended = false;
};

// Builds a model from its blocks; symbols are read off the blocks.
QbdModel make_model(QtMatrix a_m1, QtMatrix a_0, QtMatrix a_1, std::string family = "custom");

QbdModel jackson(const JacksonParams& prm, bool flipped = false);
QbdModel jackson(int case_number, bool flipped);
// Case k, flipped when the study does so (cases 2, 6, 10).
QbdModel jackson_study_case(int k);

QbdModel idle_server(double lambda1, double lambda2, double mu1, double mu2);

// H rows are i = +1, 0, -1 (top to bottom), columns j = -1, 0, 1.
// Y rows are i = +1, 0, -1, columns j = 0, 1.
using Stencil3 = std::array<std::array<double, 3>, 3>;
using Stencil32 = std::array<std::array<double, 2>, 3>;
QbdModel rwqp(const Stencil3& h, const Stencil32& y);
// The walk with H = [[1,0,1],[2,0,0],[2,2,1]]/9 and Y = [[1,1],[0,1],[0,0]]/3.
QbdModel rwqp_example();

DriftReport drift_check(const QbdModel& m);

// Largest |1 - row sum| of A_-1 + A_0 + A_1 over the first k rows and the
// smallest entry found in those rows.
struct ModelCheck {
  double max_defect = 0.0;
  double min_entry = 0.0;
};
ModelCheck check_model(const QbdModel& m, int k = 64);

// key=value model description; '#' starts a comment.
//   family=jackson   case=N [flipped=auto|true|false] or lambda1 lambda2 mu1 mu2 p q [flipped]
//   family=idle      lambda1 lambda2 mu1 mu2
//   family=rwqp      h_p1 h_0 h_m1 (three numbers each), y_p1 y_0 y_m1 (two numbers each)
// Numbers may be written as fractions, e.g. 2/9.
using ModelSpec = std::map<std::string, std::string>;
ModelSpec parse_model_spec(std::istream& is);
QbdModel build_model(const ModelSpec& spec);

}  // namespace qtqme
