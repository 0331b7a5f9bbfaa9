// Multiplier recovery and stationarity classification, on the MPCC side
// (W/C/M/S) and on the regularized side (KKT).
#pragma once

#include <Eigen/Core>

#include "mpcc/active.hpp"
#include "mpcc/problem.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

// Minimum-norm least-squares solution of
//   Df(x) = sum sigma1_j DF1_j + sum sigma2_j DF2_j
//         + sum (rho1_j DF1_j + rho2_j DF2_j)
// over the active sets of `pattern`.  The point is declared W-stationary
// when the residual is below stat * (1 + ||Df(x)||).
MpccMultipliers recover_mpcc_multipliers(const MpccProblem& prob,
                                         const Eigen::VectorXd& x,
                                         const ActivePattern& pattern,
                                         const Tolerances& tol);

// Strongest of the nested classes satisfied by the biactive sign
// conditions; W when it only solves the stationarity equation, and
// NotStationary when the residual test failed.
StationarityClass classify(const MpccMultipliers& mult, double zeroTol);

// Least-squares multipliers of the regularized stationarity equation
//   Df(x) = -sum eta_j D(F1_j F2_j) + sum nu1_j DF1_j + sum nu2_j DF2_j,
// supported on the active pattern (inactive multipliers are fixed at zero).
// kkt is set when the residual is small and, for the inequality variant,
// all multipliers are nonnegative; the equality variant leaves eta
// sign-free.
KktMultipliers recover_kkt_multipliers(const MpccProblem& prob,
                                       const Regularization& reg,
                                       const Eigen::VectorXd& x,
                                       const ActivePattern& pattern,
                                       const Tolerances& tol);

}  // namespace mpcc
