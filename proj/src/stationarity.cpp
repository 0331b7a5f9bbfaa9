#include "mpcc/stationarity.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace mpcc {

namespace {

struct LstsqOut {
  Eigen::VectorXd coeffs;
  double residual = 0.0;
  bool full_column_rank = true;
};

// Minimum-norm least squares for A c ~ b via SVD.
LstsqOut min_norm_lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        double rankTol) {
  LstsqOut out;
  if (A.cols() == 0) {
    out.coeffs.resize(0);
    out.residual = b.norm();
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  svd.setThreshold(rankTol);
  out.coeffs = svd.solve(b);
  out.residual = (A * out.coeffs - b).norm();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) / smax > rankTol) ++rank;
  out.full_column_rank = rank == A.cols();
  return out;
}

}  // namespace

MpccMultipliers recover_mpcc_multipliers(const MpccProblem& prob,
                                         const Eigen::VectorXd& x,
                                         const ActivePattern& pattern,
                                         const Tolerances& tol) {
  prob.check_dimension(x);
  const Eigen::VectorXd g = prob.f.gradient(x);
  const int m = static_cast<int>(pattern.a01.size() + pattern.a10.size() +
                                 2 * pattern.a00.size());
  Eigen::MatrixXd A(prob.n, m);
  int c = 0;
  for (int j : pattern.a01) A.col(c++) = prob.F1[j].gradient(x);
  for (int j : pattern.a10) A.col(c++) = prob.F2[j].gradient(x);
  for (int j : pattern.a00) {
    A.col(c++) = prob.F1[j].gradient(x);
    A.col(c++) = prob.F2[j].gradient(x);
  }

  LstsqOut sol = min_norm_lstsq(A, g, tol.rank);
  MpccMultipliers mult;
  c = 0;
  for (int j : pattern.a01) mult.sigma1[j] = sol.coeffs(c++);
  for (int j : pattern.a10) mult.sigma2[j] = sol.coeffs(c++);
  for (int j : pattern.a00) {
    mult.rho1[j] = sol.coeffs(c++);
    mult.rho2[j] = sol.coeffs(c++);
  }
  mult.residual = sol.residual;
  mult.w_stationary = sol.residual <= tol.stat * (1.0 + g.norm());
  mult.certified_unique = sol.full_column_rank;
  return mult;
}

StationarityClass classify(const MpccMultipliers& mult, double zeroTol) {
  if (!mult.w_stationary) return StationarityClass::NotStationary;
  const double z = effective_zero_tol(mult, zeroTol);
  auto sign_of = [z](double v) { return v > z ? 1 : (v < -z ? -1 : 0); };

  bool c_ok = true, m_ok = true, s_ok = true;
  for (const auto& [j, r1] : mult.rho1) {
    auto it = mult.rho2.find(j);
    const double r2 = it == mult.rho2.end() ? 0.0 : it->second;
    const int s1 = sign_of(r1), s2 = sign_of(r2);
    if (s1 * s2 < 0) c_ok = false;
    if (!((s1 > 0 && s2 > 0) || s1 == 0 || s2 == 0)) m_ok = false;
    if (s1 < 0 || s2 < 0) s_ok = false;
  }
  if (c_ok && m_ok && s_ok) return StationarityClass::S;
  if (c_ok && m_ok) return StationarityClass::M;
  if (c_ok) return StationarityClass::C;
  return StationarityClass::W;
}

KktMultipliers recover_kkt_multipliers(const MpccProblem& prob,
                                       const Regularization& reg,
                                       const Eigen::VectorXd& x,
                                       const ActivePattern& pattern,
                                       const Tolerances& tol) {
  prob.check_dimension(x);
  const Eigen::VectorXd g = prob.f.gradient(x);
  const int m = static_cast<int>(pattern.H.size() + pattern.N1.size() +
                                 pattern.N2.size());
  Eigen::MatrixXd A(prob.n, m);
  int c = 0;
  for (int j : pattern.H) A.col(c++) = -prob.product_gradient(j, x);
  for (int j : pattern.N1) A.col(c++) = prob.F1[j].gradient(x);
  for (int j : pattern.N2) A.col(c++) = prob.F2[j].gradient(x);

  LstsqOut sol = min_norm_lstsq(A, g, tol.rank);
  KktMultipliers mult;
  c = 0;
  for (int j : pattern.H) mult.eta[j] = sol.coeffs(c++);
  for (int j : pattern.N1) mult.nu1[j] = sol.coeffs(c++);
  for (int j : pattern.N2) mult.nu2[j] = sol.coeffs(c++);
  mult.residual = sol.residual;

  bool signs_ok = true;
  const double z = effective_zero_tol(mult, tol.zero);
  if (reg.kind == RegKind::ScholtesInequality)
    for (const auto& [j, v] : mult.eta) signs_ok = signs_ok && v >= -z;
  for (const auto& [j, v] : mult.nu1) signs_ok = signs_ok && v >= -z;
  for (const auto& [j, v] : mult.nu2) signs_ok = signs_ok && v >= -z;
  mult.kkt = signs_ok && sol.residual <= tol.stat * (1.0 + g.norm());
  return mult;
}

}  // namespace mpcc
