// Tangent spaces, restricted Hessians, inertia, the quadratic/biactive/
// C-indices, the nondegeneracy verdicts NDC1-NDC4 and ND1-ND3, and the
// second-order conditions SONC, SSOSC and MPCC-SOC.
#pragma once

#include <Eigen/Core>

#include "mpcc/active.hpp"
#include "mpcc/problem.hpp"
#include "mpcc/stationarity.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

struct TangentBasis {
  Eigen::MatrixXd columns;  // orthonormal, one column per tangent direction
  int dim = 0;
};

// Orthonormal null-space basis of the stacked active-constraint gradients.
// The pattern decides the side: a01/a10/a00 rows for MPCC, H/N1/N2 rows for
// a regularized point.
TangentBasis tangent_space(const MpccProblem& prob, const Eigen::VectorXd& x,
                           const ActivePattern& pattern, double rankTol);

// Eigenvalue sign counts of a symmetric matrix; |lambda| below
// eigZeroTol * (1 + max|lambda|) counts as zero.
Inertia inertia(const Eigen::MatrixXd& symmetric, double eigZeroTol);

// Full first/second-order analysis of a W-stationary MPCC point.
struct MpccPointAnalysis {
  ActivePattern pattern;
  MpccMultipliers mult;
  SignPartition signs;
  StationarityClass cls = StationarityClass::NotStationary;
  LicqResult licq;
  TangentBasis tangent;
  Eigen::MatrixXd restricted_hessian;
  IndexReport report;
};

// Throws InfeasiblePointError / NotStationaryError when the preconditions
// fail.  NDC flags: NDC1 = MPCC-LICQ, NDC2 = no vanishing or mixed-sign
// biactive pair, NDC3 = nonsingular restricted Hessian, NDC4 = no vanishing
// non-biactive multiplier.  ci = qi + bi when NDC1-NDC3 hold.
MpccPointAnalysis mpcc_index_report(const MpccProblem& prob,
                                    const Eigen::VectorXd& x,
                                    const Tolerances& tol);

struct KktPointAnalysis {
  ActivePattern pattern;
  KktMultipliers mult;
  LicqResult licq;
  TangentBasis tangent;
  Eigen::MatrixXd restricted_hessian;
  IndexReport report;
};

// ND flags of a KKT point of the regularization: ND1 = LICQ, ND2 = active
// multipliers do not vanish (the equality smoothing's eta, belonging to an
// equality constraint, is exempt), ND3 = nonsingular restricted Hessian.
KktPointAnalysis kkt_index_report(const MpccProblem& prob, const Regularization& reg,
                                  const Eigen::VectorXd& x, const Tolerances& tol);

enum class SocFlag { Holds, Fails, IndeterminateOnCone };

const char* to_string(SocFlag f);

struct MpccSecondOrder {
  SocFlag ssosc = SocFlag::IndeterminateOnCone;
  SocFlag mpcc_soc = SocFlag::IndeterminateOnCone;
};

// SSOSC and MPCC-SOC on their critical cones, built from the sign-partitioned
// active sets of `analysis`.  Cones that are linear subspaces are decided by
// inertia; a cone with genuine inequality rows is tested on its lineality
// space and then sampled (fixed seed), returning IndeterminateOnCone when
// every sample passes.
MpccSecondOrder second_order_conditions(const MpccProblem& prob,
                                        const Eigen::VectorXd& x,
                                        const MpccPointAnalysis& analysis,
                                        const Tolerances& tol);

// Second-order necessary condition of the regularization on the critical
// subspace spanned by the strictly-positive multipliers.  Reports
// IndeterminateOnCone when LICQ fails (multipliers not unique).
SocFlag sonc(const MpccProblem& prob, const Regularization& reg,
             const Eigen::VectorXd& x, const KktPointAnalysis& analysis,
             const Tolerances& tol);

}  // namespace mpcc
