#include "mpcc/indices.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mpcc {

TangentBasis tangent_space(const MpccProblem& prob, const Eigen::VectorXd& x,
                           const ActivePattern& pattern, double rankTol) {
  prob.check_dimension(x);
  const Eigen::MatrixXd rows = pattern.side == Side::Mpcc
                                   ? active_gradients_mpcc(prob, x, pattern)
                                   : active_gradients_regularized(prob, x, pattern);
  TangentBasis basis;
  if (rows.rows() == 0) {
    basis.columns = Eigen::MatrixXd::Identity(prob.n, prob.n);
    basis.dim = prob.n;
    return basis;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) / smax > rankTol) ++rank;
  basis.dim = prob.n - rank;
  basis.columns = svd.matrixV().rightCols(basis.dim);
  return basis;
}

Inertia inertia(const Eigen::MatrixXd& symmetric, double eigZeroTol) {
  Inertia in;
  if (symmetric.rows() == 0) return in;
  if (symmetric.rows() != symmetric.cols())
    throw InputError("inertia needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (symmetric + symmetric.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double z = eigZeroTol * (1.0 + scale);
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= z)
      ++in.zero;
    else if (ev(i) < 0.0)
      ++in.neg;
    else
      ++in.pos;
  }
  return in;
}

namespace {

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& h, const TangentBasis& basis) {
  return basis.columns.transpose() * h * basis.columns;
}

// Null-space basis of an explicit row matrix (empty rows -> identity).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& rows, int n, double rankTol) {
  if (rows.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) / smax > rankTol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Positive definiteness of h restricted to the span of `basis`.
SocFlag definite_on(const Eigen::MatrixXd& h, const Eigen::MatrixXd& basis,
                    double eigZeroTol) {
  if (basis.cols() == 0) return SocFlag::Holds;
  Inertia in = inertia(basis.transpose() * h * basis, eigZeroTol);
  return (in.neg == 0 && in.zero == 0) ? SocFlag::Holds : SocFlag::Fails;
}

}  // namespace

MpccPointAnalysis mpcc_index_report(const MpccProblem& prob,
                                    const Eigen::VectorXd& x,
                                    const Tolerances& tol) {
  MpccPointAnalysis a;
  a.pattern = mpcc_active(prob, x, tol.feas);
  a.mult = recover_mpcc_multipliers(prob, x, a.pattern, tol);
  if (!a.mult.w_stationary)
    throw NotStationaryError("point is not W-stationary (residual " +
                             std::to_string(a.mult.residual) + ")");
  a.cls = classify(a.mult, tol.zero);
  a.signs = sign_partition(a.pattern, a.mult, tol.zero);
  a.licq = check_mpcc_licq(prob, x, tol.rank, tol.feas);
  a.tangent = tangent_space(prob, x, a.pattern, tol.rank);
  const Eigen::MatrixXd h = mpcc_lagrangian_hessian(prob, x, a.mult, a.pattern);
  a.restricted_hessian = restrict_to(h, a.tangent);
  const Inertia in = inertia(a.restricted_hessian, tol.eig);

  const double z = effective_zero_tol(a.mult, tol.zero);
  bool ndc2 = true;
  for (int j : a.pattern.a00) {
    const double r1 = a.mult.rho1.at(j), r2 = a.mult.rho2.at(j);
    ndc2 = ndc2 && std::abs(r1) > z && std::abs(r2) > z && r1 * r2 > 0.0;
  }
  bool ndc4 = true;
  for (int j : a.pattern.a01) ndc4 = ndc4 && std::abs(a.mult.sigma1.at(j)) > z;
  for (int j : a.pattern.a10) ndc4 = ndc4 && std::abs(a.mult.sigma2.at(j)) > z;

  IndexReport& rep = a.report;
  rep.qi = in.neg;
  rep.zero_eigs = in.zero;
  rep.tangent_dim = a.tangent.dim;
  rep.bi = static_cast<int>(a.signs.a00_minus.size());
  rep.ndc = {a.licq.holds, ndc2, in.zero == 0, ndc4};
  if ((*rep.ndc)[0] && (*rep.ndc)[1] && (*rep.ndc)[2]) rep.ci = rep.qi + rep.bi;
  return a;
}

KktPointAnalysis kkt_index_report(const MpccProblem& prob, const Regularization& reg,
                                  const Eigen::VectorXd& x, const Tolerances& tol) {
  KktPointAnalysis a;
  a.pattern = regularized_active(prob, reg, x, tol.feas);
  a.mult = recover_kkt_multipliers(prob, reg, x, a.pattern, tol);
  if (!a.mult.kkt)
    throw NotStationaryError("point is not a KKT point of the regularization "
                             "(residual " + std::to_string(a.mult.residual) + ")");
  a.licq = check_licq(prob, reg, x, tol.rank, tol.feas);
  a.tangent = tangent_space(prob, x, a.pattern, tol.rank);
  const Eigen::MatrixXd h = scholtes_lagrangian_hessian(prob, x, a.mult, a.pattern);
  a.restricted_hessian = restrict_to(h, a.tangent);
  const Inertia in = inertia(a.restricted_hessian, tol.eig);

  const double z = effective_zero_tol(a.mult, tol.zero);
  bool nd2 = true;
  // Strict complementarity concerns inequality multipliers only; under the
  // equality smoothing the product constraint is an equality and eta is
  // exempt.
  if (reg.kind == RegKind::ScholtesInequality)
    for (int j : a.pattern.H) nd2 = nd2 && a.mult.eta.at(j) > z;
  for (int j : a.pattern.N1) nd2 = nd2 && a.mult.nu1.at(j) > z;
  for (int j : a.pattern.N2) nd2 = nd2 && a.mult.nu2.at(j) > z;

  IndexReport& rep = a.report;
  rep.qi = in.neg;
  rep.zero_eigs = in.zero;
  rep.tangent_dim = a.tangent.dim;
  rep.nd = {a.licq.holds, nd2, in.zero == 0};
  return a;
}

const char* to_string(SocFlag f) {
  switch (f) {
    case SocFlag::Holds: return "holds";
    case SocFlag::Fails: return "fails";
    case SocFlag::IndeterminateOnCone: return "indeterminate-on-cone";
  }
  return "?";
}

MpccSecondOrder second_order_conditions(const MpccProblem& prob,
                                        const Eigen::VectorXd& x,
                                        const MpccPointAnalysis& a,
                                        const Tolerances& tol) {
  MpccSecondOrder out;
  const Eigen::MatrixXd h = mpcc_lagrangian_hessian(prob, x, a.mult, a.pattern);
  const double z = effective_zero_tol(a.mult, tol.zero);
  const int n = prob.n;

  // SSOSC cone: DF1 rows for a01 pairs with nonzero multiplier and biactive
  // pairs with rho1 > 0; DF2 rows symmetric.  Always a linear subspace.
  {
    std::vector<Eigen::VectorXd> rows;
    for (int j : a.signs.a01_minus) rows.push_back(prob.F1[j].gradient(x));
    for (int j : a.signs.a01_plus) rows.push_back(prob.F1[j].gradient(x));
    for (int j : a.signs.a10_minus) rows.push_back(prob.F2[j].gradient(x));
    for (int j : a.signs.a10_plus) rows.push_back(prob.F2[j].gradient(x));
    for (int j : a.pattern.a00) {
      if (a.mult.rho1.at(j) > z) rows.push_back(prob.F1[j].gradient(x));
      if (a.mult.rho2.at(j) > z) rows.push_back(prob.F2[j].gradient(x));
    }
    Eigen::MatrixXd m(rows.size(), n);
    for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i];
    out.ssosc = definite_on(h, null_space(m, n, tol.rank), tol.eig);
  }

  // MPCC-SOC cone: equality rows DF1 over a01 and rho1-positive biactive
  // pairs, DF2 over a10 and rho2-positive ones; inequality rows DF1/DF2 >= 0
  // where the biactive multiplier vanishes.
  {
    std::vector<Eigen::VectorXd> eq, ineq;
    for (int j : a.pattern.a01) eq.push_back(prob.F1[j].gradient(x));
    for (int j : a.pattern.a10) eq.push_back(prob.F2[j].gradient(x));
    for (int j : a.pattern.a00) {
      const double r1 = a.mult.rho1.at(j), r2 = a.mult.rho2.at(j);
      if (r1 > z) eq.push_back(prob.F1[j].gradient(x));
      else if (std::abs(r1) <= z) ineq.push_back(prob.F1[j].gradient(x));
      if (r2 > z) eq.push_back(prob.F2[j].gradient(x));
      else if (std::abs(r2) <= z) ineq.push_back(prob.F2[j].gradient(x));
    }
    Eigen::MatrixXd meq(eq.size(), n);
    for (size_t i = 0; i < eq.size(); ++i) meq.row(static_cast<int>(i)) = eq[i];

    if (ineq.empty()) {
      out.mpcc_soc = definite_on(h, null_space(meq, n, tol.rank), tol.eig);
    } else {
      // Lineality space first: necessary for positivity on the whole cone.
      Eigen::MatrixXd mall(eq.size() + ineq.size(), n);
      for (size_t i = 0; i < eq.size(); ++i) mall.row(static_cast<int>(i)) = eq[i];
      for (size_t i = 0; i < ineq.size(); ++i)
        mall.row(static_cast<int>(eq.size() + i)) = ineq[i];
      if (definite_on(h, null_space(mall, n, tol.rank), tol.eig) == SocFlag::Fails) {
        out.mpcc_soc = SocFlag::Fails;
      } else {
        // Sample the cone; a failing sample is a certificate, an all-pass run
        // is not, so the best verdict is indeterminate.
        const Eigen::MatrixXd base = null_space(meq, n, tol.rank);
        std::mt19937_64 rng(0x5eed5eedULL);
        std::normal_distribution<double> gauss(0.0, 1.0);
        SocFlag verdict = SocFlag::IndeterminateOnCone;
        int tested = 0;
        for (int it = 0; it < 20000 && tested < 1000; ++it) {
          Eigen::VectorXd c(base.cols());
          for (int i = 0; i < c.size(); ++i) c(i) = gauss(rng);
          Eigen::VectorXd xi = base * c;
          if (xi.norm() < 1e-12) continue;
          xi.normalize();
          bool in_cone = true, in_cone_neg = true;
          for (const auto& row : ineq) {
            const double v = row.dot(xi);
            in_cone = in_cone && v >= -1e-12;
            in_cone_neg = in_cone_neg && -v >= -1e-12;
          }
          if (!in_cone && in_cone_neg) xi = -xi;
          else if (!in_cone) continue;
          ++tested;
          if (xi.dot(h * xi) <= tol.eig * (1.0 + h.norm())) {
            verdict = SocFlag::Fails;
            break;
          }
        }
        out.mpcc_soc = verdict;
      }
    }
  }
  return out;
}

SocFlag sonc(const MpccProblem& prob, const Regularization& reg,
             const Eigen::VectorXd& x, const KktPointAnalysis& a,
             const Tolerances& tol) {
  if (!a.licq.holds) return SocFlag::IndeterminateOnCone;
  const double z = effective_zero_tol(a.mult, tol.zero);
  std::vector<Eigen::VectorXd> rows;
  for (int j : a.pattern.H)
    if (a.mult.eta.at(j) > z) rows.push_back(prob.product_gradient(j, x));
  for (int j : a.pattern.N1)
    if (a.mult.nu1.at(j) > z) rows.push_back(prob.F1[j].gradient(x));
  for (int j : a.pattern.N2)
    if (a.mult.nu2.at(j) > z) rows.push_back(prob.F2[j].gradient(x));
  Eigen::MatrixXd m(rows.size(), prob.n);
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i];
  const Eigen::MatrixXd basis = null_space(m, prob.n, tol.rank);
  if (basis.cols() == 0) return SocFlag::Holds;
  const Eigen::MatrixXd h = scholtes_lagrangian_hessian(prob, x, a.mult, a.pattern);
  Inertia in = inertia(basis.transpose() * h * basis, tol.eig);
  return in.neg == 0 ? SocFlag::Holds : SocFlag::Fails;
}

}  // namespace mpcc
