// The bundled example problems with their known stationary points,
// multipliers, patterns, flags, and indices, used for end-to-end
// verification of the analysis pipeline.
//
// Golden values are stored as closed forms in the regularization parameter t
// (rational functions, optionally in sqrt(t)) and evaluated at sample
// points, so a single source of truth serves every tolerance.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpcc/problem.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

// p(v)/q(v) with v = t or v = sqrt(t); coefficients in ascending powers.
struct RationalFn {
  std::vector<double> num{0.0};
  std::vector<double> den{1.0};
  bool sqrt_arg = false;

  double eval(double t) const;
  static RationalFn from_json(const nlohmann::json& j);
};

struct GoldenPoint {
  std::string label;
  Side side = Side::Mpcc;
  RegKind variant = RegKind::ScholtesInequality;
  std::vector<RationalFn> x;
  ActivePattern pattern;  // expected active sets
  // Expected multipliers by family name: sigma1/sigma2/rho1/rho2 on the MPCC
  // side, eta/nu1/nu2 on the regularized side.  Keys are 0-based here.
  std::map<std::string, std::map<int, RationalFn>> multipliers;
  std::optional<std::array<bool, 4>> ndc;
  std::optional<std::array<bool, 3>> nd;
  std::optional<int> qi, bi;
  std::optional<int> ci;  // expected C-index; unset means expected null
  bool ci_expected_null = false;
  std::optional<StationarityClass> cls;

  // Quadratic-form spot checks on the restricted Lagrangian Hessian:
  // xi^T D^2L xi must equal value(t) for the given (unnormalized) direction.
  struct FormCheck {
    std::vector<double> xi;
    RationalFn value;
  };
  std::vector<FormCheck> hessian_form_checks;
};

struct GoldenCase {
  std::string name;
  MpccProblem problem;
  double t_max_valid = 1.0;
  std::vector<GoldenPoint> points;
};

// The six case identifiers.
const std::vector<std::string>& corpus_names();

// Resolution order for the data directory: explicit argument, the
// MPCC_DATA_DIR environment variable, then the compiled-in default.
std::string corpus_data_dir(const std::string& override_dir = "");

GoldenCase corpus_load(const std::string& name, const std::string& dataDir = "");

struct VerifyEntry {
  std::string case_name;
  std::string label;
  std::string field;
  double t = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyLedger {
  std::vector<VerifyEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return !entries.empty();
  }
};

// Recomputes active patterns, multipliers, flags, and indices for every
// marked point of a loaded case via the analysis modules and diffs them
// against the golden values at absolute tolerance `valueTol`.  Point
// families are sampled at t in {tMax/2, tMax/8, 1e-4}.
VerifyLedger verify_case(const GoldenCase& gc, const Tolerances& tol,
                         double valueTol = 1e-8);

VerifyLedger corpus_verify_all(const Tolerances& tol, double valueTol = 1e-8,
                               const std::string& dataDir = "");

}  // namespace mpcc
