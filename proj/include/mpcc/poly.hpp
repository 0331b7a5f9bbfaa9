// Exact multivariate polynomials with symbolic differentiation.
//
// A Poly is a canonical term map: exponent vector -> coefficient, with no
// zero coefficients and no duplicate exponent vectors.  All first- and
// second-order information of the defining functions is obtained by exact
// differentiation of the term data, so the analysis layers above are free
// of differentiation error.
#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace mpcc {

class Poly {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, double>;

  Poly() = default;
  explicit Poly(int nvars);

  static Poly constant(int nvars, double value);
  static Poly variable(int nvars, int index);
  static Poly monomial(int nvars, double coef, Exponents exps);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  double eval(const Eigen::VectorXd& x) const;

  // Exact partial derivative with respect to variable `var`.
  Poly partial(int var) const;
  std::vector<Poly> gradient() const;
  std::vector<std::vector<Poly>> hessian() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;
  Poly operator-() const;

  bool same_terms(const Poly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  // Serialized form: [[coef, [e1, ..., en]], ...].  Parsing merges duplicate
  // exponent vectors and drops zero coefficients, so parse/serialize is
  // idempotent.
  static Poly from_json(const nlohmann::json& j, int nvars);
  nlohmann::json to_json() const;
  std::string to_string() const;

 private:
  void add_term(double coef, Exponents e);

  int nvars_ = 0;
  TermMap terms_;
};

// Polynomial bundled with its precomputed gradient and Hessian, for repeated
// numeric evaluation.  Immutable after construction.
class PolyCalc {
 public:
  PolyCalc() = default;
  explicit PolyCalc(Poly p);

  const Poly& poly() const { return poly_; }
  int nvars() const { return poly_.nvars(); }

  double value(const Eigen::VectorXd& x) const { return poly_.eval(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

 private:
  Poly poly_;
  std::vector<Poly> grad_;
  std::vector<std::vector<Poly>> hess_;
};

}  // namespace mpcc
