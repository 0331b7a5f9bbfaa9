#include "mpcc/active.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace mpcc {

namespace {

bool near_zero(double v, double tol) { return std::abs(v) <= tol * (1.0 + std::abs(v)); }

LicqResult rank_of_rows(const Eigen::MatrixXd& rows, double rankTol) {
  LicqResult r;
  r.rows = static_cast<int>(rows.rows());
  if (r.rows == 0) {
    // No active constraints: full row rank, trivially.
    r.holds = true;
    r.rank = 0;
    return r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  r.singular_values = svd.singularValues();
  const double smax = r.singular_values(0);
  if (smax <= 0.0) {
    r.rank = 0;
    r.holds = false;
    return r;
  }
  r.rank = 0;
  for (int i = 0; i < r.singular_values.size(); ++i)
    if (r.singular_values(i) / smax > rankTol) ++r.rank;
  r.holds = r.rank == r.rows;
  return r;
}

}  // namespace

ActivePattern mpcc_active(const MpccProblem& prob, const Eigen::VectorXd& x,
                          double tol) {
  FeasibilityResult feas = feasible_mpcc(prob, x, tol);
  if (!feas.feasible)
    throw InfeasiblePointError("point is not MPCC-feasible", feas.violations);
  ActivePattern p;
  p.side = Side::Mpcc;
  for (const ConstraintResidual& c : feas.residuals) {
    const bool z1 = near_zero(c.f1, tol);
    const bool z2 = near_zero(c.f2, tol);
    if (z1 && z2)
      p.a00.push_back(c.j);
    else if (z1)
      p.a01.push_back(c.j);
    else if (z2)
      p.a10.push_back(c.j);
    // Feasibility forces at least one factor of every pair to vanish.
  }
  return p;
}

ActivePattern regularized_active(const MpccProblem& prob, const Regularization& reg,
                                 const Eigen::VectorXd& x, double tol) {
  FeasibilityResult feas = feasible_regularized(prob, reg, x, tol);
  if (!feas.feasible)
    throw InfeasiblePointError("point is not feasible for the regularization",
                               feas.violations);
  ActivePattern p;
  p.side = Side::Regularized;
  for (const ConstraintResidual& c : feas.residuals) {
    if (reg.kind == RegKind::EqualitySmoothing ||
        std::abs(c.product - reg.t) <= tol * (1.0 + reg.t))
      p.H.push_back(c.j);
    if (near_zero(c.f1, tol)) p.N1.push_back(c.j);
    if (near_zero(c.f2, tol)) p.N2.push_back(c.j);
  }
  return p;
}

double effective_zero_tol(const MpccMultipliers& mult, double zeroTol) {
  return zeroTol * (1.0 + mult.max_abs());
}

double effective_zero_tol(const KktMultipliers& mult, double zeroTol) {
  return zeroTol * (1.0 + mult.max_abs());
}

SignPartition sign_partition(const ActivePattern& pattern,
                             const MpccMultipliers& mult, double zeroTol) {
  SignPartition s;
  const double z = effective_zero_tol(mult, zeroTol);
  auto side = [&](const std::vector<int>& js, const std::map<int, double>& m,
                  std::vector<int>& minus, std::vector<int>& zero,
                  std::vector<int>& plus) {
    for (int j : js) {
      auto it = m.find(j);
      const double v = it == m.end() ? 0.0 : it->second;
      if (v < -z)
        minus.push_back(j);
      else if (v > z)
        plus.push_back(j);
      else
        zero.push_back(j);
    }
  };
  side(pattern.a01, mult.sigma1, s.a01_minus, s.a01_zero, s.a01_plus);
  side(pattern.a10, mult.sigma2, s.a10_minus, s.a10_zero, s.a10_plus);
  for (int j : pattern.a00) {
    auto i1 = mult.rho1.find(j);
    auto i2 = mult.rho2.find(j);
    const double r1 = i1 == mult.rho1.end() ? 0.0 : i1->second;
    const double r2 = i2 == mult.rho2.end() ? 0.0 : i2->second;
    if (r1 < -z && r2 < -z)
      s.a00_minus.push_back(j);
    else if (r1 > z && r2 > z)
      s.a00_plus.push_back(j);
    else
      s.a00_zero.push_back(j);
  }
  return s;
}

Eigen::MatrixXd active_gradients_mpcc(const MpccProblem& prob,
                                      const Eigen::VectorXd& x,
                                      const ActivePattern& pattern) {
  const int m = static_cast<int>(pattern.a01.size() + pattern.a10.size() +
                                 2 * pattern.a00.size());
  Eigen::MatrixXd rows(m, prob.n);
  int r = 0;
  for (int j : pattern.a01) rows.row(r++) = prob.F1[j].gradient(x);
  for (int j : pattern.a00) rows.row(r++) = prob.F1[j].gradient(x);
  for (int j : pattern.a10) rows.row(r++) = prob.F2[j].gradient(x);
  for (int j : pattern.a00) rows.row(r++) = prob.F2[j].gradient(x);
  return rows;
}

Eigen::MatrixXd active_gradients_regularized(const MpccProblem& prob,
                                             const Eigen::VectorXd& x,
                                             const ActivePattern& pattern) {
  const int m = static_cast<int>(pattern.H.size() + pattern.N1.size() +
                                 pattern.N2.size());
  Eigen::MatrixXd rows(m, prob.n);
  int r = 0;
  for (int j : pattern.H) rows.row(r++) = prob.product_gradient(j, x);
  for (int j : pattern.N1) rows.row(r++) = prob.F1[j].gradient(x);
  for (int j : pattern.N2) rows.row(r++) = prob.F2[j].gradient(x);
  return rows;
}

LicqResult check_mpcc_licq(const MpccProblem& prob, const Eigen::VectorXd& x,
                           double rankTol, double feasTol) {
  ActivePattern p = mpcc_active(prob, x, feasTol);
  return rank_of_rows(active_gradients_mpcc(prob, x, p), rankTol);
}

LicqResult check_licq(const MpccProblem& prob, const Regularization& reg,
                      const Eigen::VectorXd& x, double rankTol, double feasTol) {
  ActivePattern p = regularized_active(prob, reg, x, feasTol);
  return rank_of_rows(active_gradients_regularized(prob, x, p), rankTol);
}

}  // namespace mpcc
