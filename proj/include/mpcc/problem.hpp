// MPCC problem instances and their regularizations.
//
// An MpccProblem holds the objective f and kappa complementarity pairs
// (F1_j, F2_j), all as exact polynomials.  The feasible set requires
// F1_j * F2_j = 0 with both factors nonnegative.  A Regularization relaxes
// the product constraint to <= t (Scholtes) or = t (equality smoothing).
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "mpcc/poly.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

enum class RegKind { ScholtesInequality, EqualitySmoothing };

struct Regularization {
  RegKind kind = RegKind::ScholtesInequality;
  double t = 0.0;

  Regularization() = default;
  Regularization(RegKind k, double t_) : kind(k), t(t_) {
    if (t_ <= 0.0) throw InputError("regularization parameter t must be positive");
  }
};

struct MpccProblem {
  std::string name;
  int n = 0;
  int kappa = 0;
  PolyCalc f;
  std::vector<PolyCalc> F1, F2;

  static MpccProblem from_json(const nlohmann::json& j);
  static MpccProblem load_file(const std::string& path);
  nlohmann::json to_json() const;

  void check_dimension(const Eigen::VectorXd& x) const;

  double product_value(int j, const Eigen::VectorXd& x) const;
  Eigen::VectorXd product_gradient(int j, const Eigen::VectorXd& x) const;
  Eigen::MatrixXd product_hessian(int j, const Eigen::VectorXd& x) const;
};

// Per-pair constraint values at a point.
struct ConstraintResidual {
  int j = 0;
  double f1 = 0.0, f2 = 0.0, product = 0.0;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<ConstraintResidual> residuals;
  std::vector<std::string> violations;
};

// Feasibility for the MPCC set: |F1*F2| <= tol, F1 >= -tol, F2 >= -tol,
// each scaled by (1 + |value|).
FeasibilityResult feasible_mpcc(const MpccProblem& prob, const Eigen::VectorXd& x,
                                double tol);

// Feasibility for the regularized set: product <= t (Scholtes) or = t
// (equality smoothing), factors nonnegative.
FeasibilityResult feasible_regularized(const MpccProblem& prob,
                                       const Regularization& reg,
                                       const Eigen::VectorXd& x, double tol);

// D^2 f - sum sigma1_j D^2 F1_j - sum sigma2_j D^2 F2_j
//       - sum (rho1_j D^2 F1_j + rho2_j D^2 F2_j) over the active sets.
Eigen::MatrixXd mpcc_lagrangian_hessian(const MpccProblem& prob,
                                        const Eigen::VectorXd& x,
                                        const MpccMultipliers& mult,
                                        const ActivePattern& pattern);

// D^2 f + sum eta_j D^2(F1_j F2_j) - sum nu1_j D^2 F1_j - sum nu2_j D^2 F2_j
// over H, N1, N2 of the pattern.
Eigen::MatrixXd scholtes_lagrangian_hessian(const MpccProblem& prob,
                                            const Eigen::VectorXd& x,
                                            const KktMultipliers& mult,
                                            const ActivePattern& pattern);

}  // namespace mpcc
