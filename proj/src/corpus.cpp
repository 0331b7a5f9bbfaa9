#include "mpcc/corpus.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mpcc/indices.hpp"
#include "mpcc/stationarity.hpp"

#ifndef MPCC_DATA_DIR
#define MPCC_DATA_DIR "data"
#endif

namespace mpcc {

double RationalFn::eval(double t) const {
  const double v = sqrt_arg ? std::sqrt(t) : t;
  auto horner = [v](const std::vector<double>& c) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * v + *it;
    return s;
  };
  const double d = horner(den);
  if (d == 0.0) throw InputError("rational closed form has a pole at the sample");
  return horner(num) / d;
}

RationalFn RationalFn::from_json(const nlohmann::json& j) {
  RationalFn f;
  if (j.is_number()) {
    f.num = {j.get<double>()};
    f.den = {1.0};
    return f;
  }
  f.num = j.at("num").get<std::vector<double>>();
  f.den = j.value("den", std::vector<double>{1.0});
  f.sqrt_arg = j.value("sqrt", false);
  if (f.num.empty() || f.den.empty())
    throw InputError("rational closed form needs nonempty coefficients");
  return f;
}

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "ndc2fail", "ndc4", "ssosc", "2min", "continuum", "continuum2"};
  return names;
}

std::string corpus_data_dir(const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("MPCC_DATA_DIR")) return env;
  return MPCC_DATA_DIR;
}

namespace {

std::vector<int> to_zero_based(const nlohmann::json& arr) {
  std::vector<int> v;
  for (const auto& e : arr) {
    const int j = e.get<int>();
    if (j < 1) throw InputError("golden index sets are 1-based");
    v.push_back(j - 1);
  }
  std::sort(v.begin(), v.end());
  return v;
}

std::map<int, RationalFn> parse_multipliers(const nlohmann::json& obj) {
  std::map<int, RationalFn> m;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    m[std::stoi(it.key()) - 1] = RationalFn::from_json(it.value());
  return m;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("data file " + path + " is not valid JSON: " + e.what());
  }
  return j;
}

StationarityClass class_from_string(const std::string& s) {
  if (s == "W") return StationarityClass::W;
  if (s == "C") return StationarityClass::C;
  if (s == "M") return StationarityClass::M;
  if (s == "S") return StationarityClass::S;
  if (s == "not-stationary") return StationarityClass::NotStationary;
  throw InputError("unknown stationarity class in golden data: " + s);
}

}  // namespace

GoldenCase corpus_load(const std::string& name, const std::string& dataDir) {
  bool known = false;
  for (const auto& n : corpus_names()) known = known || n == name;
  if (!known) throw InputError("unknown corpus case: " + name);

  const std::string dir = corpus_data_dir(dataDir);
  GoldenCase gc;
  gc.name = name;
  gc.problem = MpccProblem::load_file(dir + "/problems/" + name + ".json");
  const nlohmann::json j = load_json(dir + "/golden/" + name + ".json");
  gc.t_max_valid = j.at("tMaxValid").get<double>();

  for (const auto& pj : j.at("points")) {
    GoldenPoint p;
    p.label = pj.at("label").get<std::string>();
    const std::string side = pj.at("side").get<std::string>();
    p.side = side == "mpcc" ? Side::Mpcc : Side::Regularized;
    if (p.side == Side::Regularized) {
      const std::string var = pj.value("variant", "scholtes");
      p.variant = var == "equality" ? RegKind::EqualitySmoothing
                                    : RegKind::ScholtesInequality;
    }
    for (const auto& coord : pj.at("x")) p.x.push_back(RationalFn::from_json(coord));

    const auto& pat = pj.at("pattern");
    p.pattern.side = p.side;
    if (p.side == Side::Mpcc) {
      p.pattern.a01 = to_zero_based(pat.value("a01", nlohmann::json::array()));
      p.pattern.a10 = to_zero_based(pat.value("a10", nlohmann::json::array()));
      p.pattern.a00 = to_zero_based(pat.value("a00", nlohmann::json::array()));
    } else {
      p.pattern.H = to_zero_based(pat.value("H", nlohmann::json::array()));
      p.pattern.N1 = to_zero_based(pat.value("N1", nlohmann::json::array()));
      p.pattern.N2 = to_zero_based(pat.value("N2", nlohmann::json::array()));
    }

    for (const char* fam : {"sigma1", "sigma2", "rho1", "rho2", "eta", "nu1", "nu2"})
      if (pj.contains(fam)) p.multipliers[fam] = parse_multipliers(pj.at(fam));

    if (pj.contains("ndc")) {
      auto v = pj.at("ndc").get<std::vector<bool>>();
      if (v.size() != 4) throw InputError("ndc flags need 4 entries");
      p.ndc = {v[0], v[1], v[2], v[3]};
    }
    if (pj.contains("nd")) {
      auto v = pj.at("nd").get<std::vector<bool>>();
      if (v.size() != 3) throw InputError("nd flags need 3 entries");
      p.nd = {v[0], v[1], v[2]};
    }
    if (pj.contains("qi")) p.qi = pj.at("qi").get<int>();
    if (pj.contains("bi")) p.bi = pj.at("bi").get<int>();
    if (pj.contains("ci")) {
      if (pj.at("ci").is_null())
        p.ci_expected_null = true;
      else
        p.ci = pj.at("ci").get<int>();
    }
    if (pj.contains("class")) p.cls = class_from_string(pj.at("class").get<std::string>());
    if (pj.contains("hessianFormChecks")) {
      for (const auto& fc : pj.at("hessianFormChecks")) {
        GoldenPoint::FormCheck check;
        check.xi = fc.at("xi").get<std::vector<double>>();
        check.value = RationalFn::from_json(fc.at("value"));
        p.hessian_form_checks.push_back(std::move(check));
      }
    }
    gc.points.push_back(std::move(p));
  }
  return gc;
}

namespace {

std::string set_to_string(const std::vector<int>& v) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i] + 1;
  os << "}";
  return os.str();
}

struct Checker {
  VerifyLedger& ledger;
  std::string case_name, label;
  double t;

  void check(const std::string& field, bool pass, const std::string& detail = "") {
    ledger.entries.push_back({case_name, label, field, t, pass, detail});
  }

  void check_sets(const std::string& field, const std::vector<int>& expected,
                  const std::vector<int>& actual) {
    check(field, expected == actual,
          "expected " + set_to_string(expected) + ", got " + set_to_string(actual));
  }

  void check_value(const std::string& field, double expected, double actual,
                   double tol) {
    std::ostringstream os;
    os << "expected " << expected << ", got " << actual;
    check(field, std::abs(expected - actual) <= tol, os.str());
  }
};

void verify_point(const GoldenCase& gc, const GoldenPoint& p, double t,
                  const Tolerances& tol, double valueTol, VerifyLedger& ledger) {
  Checker ck{ledger, gc.name, p.label, t};
  Eigen::VectorXd x(gc.problem.n);
  for (int i = 0; i < gc.problem.n; ++i) x(i) = p.x[i].eval(t);

  auto check_mult_family = [&](const std::string& fam,
                               const std::map<int, double>& actual) {
    auto it = p.multipliers.find(fam);
    if (it == p.multipliers.end()) return;
    for (const auto& [j, fn] : it->second) {
      auto a = actual.find(j);
      ck.check_value(fam + "[" + std::to_string(j + 1) + "]", fn.eval(t),
                     a == actual.end() ? 0.0 : a->second, valueTol);
    }
  };

  try {
    if (p.side == Side::Mpcc) {
      MpccPointAnalysis a = mpcc_index_report(gc.problem, x, tol);
      ck.check_sets("a01", p.pattern.a01, a.pattern.a01);
      ck.check_sets("a10", p.pattern.a10, a.pattern.a10);
      ck.check_sets("a00", p.pattern.a00, a.pattern.a00);
      check_mult_family("sigma1", a.mult.sigma1);
      check_mult_family("sigma2", a.mult.sigma2);
      check_mult_family("rho1", a.mult.rho1);
      check_mult_family("rho2", a.mult.rho2);
      if (p.ndc)
        for (int i = 0; i < 4; ++i)
          ck.check("NDC" + std::to_string(i + 1), (*p.ndc)[i] == (*a.report.ndc)[i],
                   (*a.report.ndc)[i] ? "holds" : "fails");
      if (p.qi) ck.check_value("qi", *p.qi, a.report.qi, 0.0);
      if (p.bi) ck.check_value("bi", *p.bi, a.report.bi, 0.0);
      if (p.ci_expected_null)
        ck.check("ci", !a.report.ci.has_value(),
                 a.report.ci ? "expected null, got value" : "null");
      else if (p.ci)
        ck.check("ci", a.report.ci.has_value() && *a.report.ci == *p.ci,
                 a.report.ci ? std::to_string(*a.report.ci) : "null");
      if (p.cls)
        ck.check("class", *p.cls == a.cls,
                 std::string("expected ") + to_string(*p.cls) + ", got " +
                     to_string(a.cls));
      for (size_t i = 0; i < p.hessian_form_checks.size(); ++i) {
        const auto& fc = p.hessian_form_checks[i];
        Eigen::VectorXd xi(gc.problem.n);
        for (int k = 0; k < gc.problem.n; ++k) xi(k) = fc.xi[k];
        const Eigen::MatrixXd h =
            mpcc_lagrangian_hessian(gc.problem, x, a.mult, a.pattern);
        ck.check_value("hessianForm[" + std::to_string(i) + "]", fc.value.eval(t),
                       xi.dot(h * xi), valueTol);
      }
    } else {
      Regularization reg(p.variant, t);
      KktPointAnalysis a = kkt_index_report(gc.problem, reg, x, tol);
      ck.check_sets("H", p.pattern.H, a.pattern.H);
      ck.check_sets("N1", p.pattern.N1, a.pattern.N1);
      ck.check_sets("N2", p.pattern.N2, a.pattern.N2);
      check_mult_family("eta", a.mult.eta);
      check_mult_family("nu1", a.mult.nu1);
      check_mult_family("nu2", a.mult.nu2);
      if (p.nd)
        for (int i = 0; i < 3; ++i)
          ck.check("ND" + std::to_string(i + 1), (*p.nd)[i] == (*a.report.nd)[i],
                   (*a.report.nd)[i] ? "holds" : "fails");
      if (p.qi) ck.check_value("qi", *p.qi, a.report.qi, 0.0);
      for (size_t i = 0; i < p.hessian_form_checks.size(); ++i) {
        const auto& fc = p.hessian_form_checks[i];
        Eigen::VectorXd xi(gc.problem.n);
        for (int k = 0; k < gc.problem.n; ++k) xi(k) = fc.xi[k];
        const Eigen::MatrixXd h =
            scholtes_lagrangian_hessian(gc.problem, x, a.mult, a.pattern);
        ck.check_value("hessianForm[" + std::to_string(i) + "]", fc.value.eval(t),
                       xi.dot(h * xi), valueTol);
      }
    }
  } catch (const std::exception& e) {
    ck.check("analysis", false, e.what());
  }
}

}  // namespace

VerifyLedger verify_case(const GoldenCase& gc, const Tolerances& tol,
                         double valueTol) {
  VerifyLedger ledger;
  for (const GoldenPoint& p : gc.points) {
    if (p.side == Side::Mpcc) {
      // t plays no role on the MPCC side; evaluate the closed forms once.
      verify_point(gc, p, gc.t_max_valid / 2.0, tol, valueTol, ledger);
    } else {
      for (double t : {gc.t_max_valid / 2.0, gc.t_max_valid / 8.0, 1e-4})
        verify_point(gc, p, t, tol, valueTol, ledger);
    }
  }
  return ledger;
}

VerifyLedger corpus_verify_all(const Tolerances& tol, double valueTol,
                               const std::string& dataDir) {
  VerifyLedger ledger;
  for (const std::string& name : corpus_names()) {
    GoldenCase gc = corpus_load(name, dataDir);
    VerifyLedger part = verify_case(gc, tol, valueTol);
    ledger.entries.insert(ledger.entries.end(), part.entries.begin(),
                          part.entries.end());
  }
  return ledger;
}

}  // namespace mpcc
