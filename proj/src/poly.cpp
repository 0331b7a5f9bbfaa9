#include "mpcc/poly.hpp"

#include <cmath>
#include <sstream>

#include "mpcc/types.hpp"

namespace mpcc {

namespace {

// Integer power by squaring; exponents are small nonnegative ints.
double ipow(double base, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw InputError("polynomial needs nvars >= 0");
}

Poly Poly::constant(int nvars, double value) {
  Poly p(nvars);
  p.add_term(value, Exponents(nvars, 0));
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw InputError("variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  Poly p(nvars);
  p.add_term(1.0, std::move(e));
  return p;
}

Poly Poly::monomial(int nvars, double coef, Exponents exps) {
  if (static_cast<int>(exps.size()) != nvars)
    throw InputError("monomial exponent vector has wrong length");
  for (int e : exps)
    if (e < 0) throw InputError("monomial exponents must be nonnegative");
  Poly p(nvars);
  p.add_term(coef, std::move(exps));
  return p;
}

void Poly::add_term(double coef, Exponents e) {
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.emplace(std::move(e), coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

double Poly::eval(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_)
    throw InputError("eval: point has dimension " + std::to_string(x.size()) +
                     ", polynomial has " + std::to_string(nvars_));
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i] != 0) m *= ipow(x[i], e[i]);
    sum += m;
  }
  return sum;
}

Poly Poly::partial(int var) const {
  if (var < 0 || var >= nvars_) throw InputError("partial: variable index out of range");
  Poly d(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents de = e;
    de[var] -= 1;
    d.add_term(c * e[var], std::move(de));
  }
  return d;
}

std::vector<Poly> Poly::gradient() const {
  std::vector<Poly> g;
  g.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) g.push_back(partial(i));
  return g;
}

std::vector<std::vector<Poly>> Poly::hessian() const {
  std::vector<std::vector<Poly>> h(nvars_, std::vector<Poly>(nvars_));
  std::vector<Poly> g = gradient();
  for (int i = 0; i < nvars_; ++i)
    for (int j = 0; j <= i; ++j) {
      h[i][j] = g[i].partial(j);
      // Mirror so both triangles hold identical terms.
      if (j != i) h[j][i] = h[i][j];
    }
  return h;
}

Poly Poly::operator+(const Poly& o) const {
  if (nvars_ != o.nvars_) throw InputError("polynomial arity mismatch in +");
  Poly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(c, e);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (nvars_ != o.nvars_) throw InputError("polynomial arity mismatch in *");
  Poly r(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(ca * cb, std::move(e));
    }
  }
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) r.add_term(c * s, e);
  return r;
}

Poly Poly::operator-() const { return *this * -1.0; }

Poly Poly::from_json(const nlohmann::json& j, int nvars) {
  if (!j.is_array()) throw InputError("polynomial json must be an array of terms");
  Poly p(nvars);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2)
      throw InputError("polynomial term must be [coef, [exponents]]");
    double coef = term[0].get<double>();
    Exponents e = term[1].get<Exponents>();
    if (static_cast<int>(e.size()) != nvars)
      throw InputError("polynomial term exponent vector has wrong length");
    for (int k : e)
      if (k < 0) throw InputError("polynomial exponents must be nonnegative");
    p.add_term(coef, std::move(e));
  }
  return p;
}

nlohmann::json Poly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : terms_) arr.push_back({c, e});
  return arr;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    double a = std::abs(c);
    bool has_var = false;
    for (int k : e) has_var = has_var || k != 0;
    if (!has_var || a != 1.0) os << a;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      os << "x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

PolyCalc::PolyCalc(Poly p) : poly_(std::move(p)) {
  grad_ = poly_.gradient();
  hess_ = poly_.hessian();
}

Eigen::VectorXd PolyCalc::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(poly_.nvars());
  for (int i = 0; i < poly_.nvars(); ++i) g[i] = grad_[i].eval(x);
  return g;
}

Eigen::MatrixXd PolyCalc::hessian(const Eigen::VectorXd& x) const {
  const int n = poly_.nvars();
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      h(i, j) = hess_[i][j].eval(x);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

}  // namespace mpcc
