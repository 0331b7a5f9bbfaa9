#include "mpcc/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mpcc {

MpccProblem MpccProblem::from_json(const nlohmann::json& j) {
  MpccProblem p;
  p.name = j.value("name", "");
  p.n = j.at("n").get<int>();
  p.kappa = j.at("kappa").get<int>();
  if (p.n <= 0) throw InputError("problem needs n >= 1");
  if (p.kappa < 1) throw InputError("problem needs kappa >= 1");
  p.f = PolyCalc(Poly::from_json(j.at("f"), p.n));
  const auto& f1 = j.at("F1");
  const auto& f2 = j.at("F2");
  if (static_cast<int>(f1.size()) != p.kappa ||
      static_cast<int>(f2.size()) != p.kappa)
    throw InputError("F1/F2 must each hold kappa polynomials");
  for (int k = 0; k < p.kappa; ++k) {
    p.F1.emplace_back(Poly::from_json(f1[k], p.n));
    p.F2.emplace_back(Poly::from_json(f2[k], p.n));
  }
  return p;
}

MpccProblem MpccProblem::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("problem file " + path + " is not valid JSON: " + e.what());
  }
  MpccProblem p = from_json(j);
  if (p.name.empty()) p.name = path;
  return p;
}

nlohmann::json MpccProblem::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["n"] = n;
  j["kappa"] = kappa;
  j["f"] = f.poly().to_json();
  nlohmann::json a1 = nlohmann::json::array(), a2 = nlohmann::json::array();
  for (int k = 0; k < kappa; ++k) {
    a1.push_back(F1[k].poly().to_json());
    a2.push_back(F2[k].poly().to_json());
  }
  j["F1"] = a1;
  j["F2"] = a2;
  return j;
}

void MpccProblem::check_dimension(const Eigen::VectorXd& x) const {
  if (x.size() != n)
    throw InputError("point has dimension " + std::to_string(x.size()) +
                     ", problem has n = " + std::to_string(n));
}

double MpccProblem::product_value(int j, const Eigen::VectorXd& x) const {
  return F1[j].value(x) * F2[j].value(x);
}

Eigen::VectorXd MpccProblem::product_gradient(int j, const Eigen::VectorXd& x) const {
  return F2[j].value(x) * F1[j].gradient(x) + F1[j].value(x) * F2[j].gradient(x);
}

Eigen::MatrixXd MpccProblem::product_hessian(int j, const Eigen::VectorXd& x) const {
  const Eigen::VectorXd g1 = F1[j].gradient(x);
  const Eigen::VectorXd g2 = F2[j].gradient(x);
  return F2[j].value(x) * F1[j].hessian(x) + g2 * g1.transpose() +
         g1 * g2.transpose() + F1[j].value(x) * F2[j].hessian(x);
}

namespace {

double scaled(double tol, double value) { return tol * (1.0 + std::abs(value)); }

std::string violation(int j, const char* what, double value) {
  std::ostringstream os;
  os << "pair " << (j + 1) << ": " << what << " = " << value;
  return os.str();
}

}  // namespace

FeasibilityResult feasible_mpcc(const MpccProblem& prob, const Eigen::VectorXd& x,
                                double tol) {
  prob.check_dimension(x);
  FeasibilityResult r;
  r.feasible = true;
  for (int j = 0; j < prob.kappa; ++j) {
    ConstraintResidual c;
    c.j = j;
    c.f1 = prob.F1[j].value(x);
    c.f2 = prob.F2[j].value(x);
    c.product = c.f1 * c.f2;
    if (std::abs(c.product) > scaled(tol, c.product))
      r.violations.push_back(violation(j, "F1*F2", c.product));
    if (c.f1 < -scaled(tol, c.f1)) r.violations.push_back(violation(j, "F1", c.f1));
    if (c.f2 < -scaled(tol, c.f2)) r.violations.push_back(violation(j, "F2", c.f2));
    r.residuals.push_back(c);
  }
  r.feasible = r.violations.empty();
  return r;
}

FeasibilityResult feasible_regularized(const MpccProblem& prob,
                                       const Regularization& reg,
                                       const Eigen::VectorXd& x, double tol) {
  prob.check_dimension(x);
  FeasibilityResult r;
  for (int j = 0; j < prob.kappa; ++j) {
    ConstraintResidual c;
    c.j = j;
    c.f1 = prob.F1[j].value(x);
    c.f2 = prob.F2[j].value(x);
    c.product = c.f1 * c.f2;
    const double slack = c.product - reg.t;
    if (reg.kind == RegKind::ScholtesInequality) {
      if (slack > tol * (1.0 + reg.t))
        r.violations.push_back(violation(j, "F1*F2 - t", slack));
    } else {
      if (std::abs(slack) > tol * (1.0 + reg.t))
        r.violations.push_back(violation(j, "F1*F2 - t", slack));
    }
    if (c.f1 < -scaled(tol, c.f1)) r.violations.push_back(violation(j, "F1", c.f1));
    if (c.f2 < -scaled(tol, c.f2)) r.violations.push_back(violation(j, "F2", c.f2));
    r.residuals.push_back(c);
  }
  r.feasible = r.violations.empty();
  return r;
}

Eigen::MatrixXd mpcc_lagrangian_hessian(const MpccProblem& prob,
                                        const Eigen::VectorXd& x,
                                        const MpccMultipliers& mult,
                                        const ActivePattern& pattern) {
  prob.check_dimension(x);
  Eigen::MatrixXd h = prob.f.hessian(x);
  auto take = [&](const std::map<int, double>& m, int j, const char* what) {
    auto it = m.find(j);
    if (it == m.end())
      throw InputError(std::string("missing multiplier ") + what + " for pair " +
                       std::to_string(j + 1));
    return it->second;
  };
  for (int j : pattern.a01) h -= take(mult.sigma1, j, "sigma1") * prob.F1[j].hessian(x);
  for (int j : pattern.a10) h -= take(mult.sigma2, j, "sigma2") * prob.F2[j].hessian(x);
  for (int j : pattern.a00) {
    h -= take(mult.rho1, j, "rho1") * prob.F1[j].hessian(x);
    h -= take(mult.rho2, j, "rho2") * prob.F2[j].hessian(x);
  }
  return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd scholtes_lagrangian_hessian(const MpccProblem& prob,
                                            const Eigen::VectorXd& x,
                                            const KktMultipliers& mult,
                                            const ActivePattern& pattern) {
  prob.check_dimension(x);
  Eigen::MatrixXd h = prob.f.hessian(x);
  auto take = [&](const std::map<int, double>& m, int j, const char* what) {
    auto it = m.find(j);
    if (it == m.end())
      throw InputError(std::string("missing multiplier ") + what + " for pair " +
                       std::to_string(j + 1));
    return it->second;
  };
  for (int j : pattern.H) h += take(mult.eta, j, "eta") * prob.product_hessian(j, x);
  for (int j : pattern.N1) h -= take(mult.nu1, j, "nu1") * prob.F1[j].hessian(x);
  for (int j : pattern.N2) h -= take(mult.nu2, j, "nu2") * prob.F2[j].hessian(x);
  return 0.5 * (h + h.transpose());
}

}  // namespace mpcc
