// Active-set detection, sign partitioning of multipliers, and the
// constraint qualifications MPCC-LICQ and LICQ.
#pragma once

#include <Eigen/Core>

#include "mpcc/problem.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

// Active sets of a MPCC-feasible point: j in a01 iff F1 vanishes and F2 is
// strictly positive, a10 symmetric, a00 when both vanish.  Throws
// InfeasiblePointError when x is not feasible at tol.
ActivePattern mpcc_active(const MpccProblem& prob, const Eigen::VectorXd& x,
                          double tol);

// Active sets of a point feasible for the regularized set: H collects the
// pairs with product at t (all pairs, for the equality smoothing), N1/N2 the
// vanishing factors.
ActivePattern regularized_active(const MpccProblem& prob, const Regularization& reg,
                                 const Eigen::VectorXd& x, double tol);

// Effective sign boundary: zeroTol * (1 + ||multipliers||_inf).
double effective_zero_tol(const MpccMultipliers& mult, double zeroTol);
double effective_zero_tol(const KktMultipliers& mult, double zeroTol);

// Splits each active set by multiplier sign.  Biactive pairs count as minus
// (plus) only when both components are strictly negative (positive) beyond
// zeroTol; everything else lands in the zero subset.
SignPartition sign_partition(const ActivePattern& pattern,
                             const MpccMultipliers& mult, double zeroTol);

struct LicqResult {
  bool holds = false;
  int rows = 0;
  int rank = 0;
  Eigen::VectorXd singular_values;
};

// Stacked gradients of the active constraints, one row per constraint.
// These rows define both the constraint qualification tests and the
// tangent spaces.
Eigen::MatrixXd active_gradients_mpcc(const MpccProblem& prob,
                                      const Eigen::VectorXd& x,
                                      const ActivePattern& pattern);
Eigen::MatrixXd active_gradients_regularized(const MpccProblem& prob,
                                             const Eigen::VectorXd& x,
                                             const ActivePattern& pattern);

// Full row rank of DF1 over a01+a00 and DF2 over a10+a00, decided by the
// smallest/largest singular-value ratio against rankTol.
LicqResult check_mpcc_licq(const MpccProblem& prob, const Eigen::VectorXd& x,
                           double rankTol, double feasTol);

// Full row rank of the product-constraint gradients over H plus DF1 over N1
// plus DF2 over N2.
LicqResult check_licq(const MpccProblem& prob, const Regularization& reg,
                      const Eigen::VectorXd& x, double rankTol, double feasTol);

}  // namespace mpcc
