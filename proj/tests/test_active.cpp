#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mpcc/active.hpp"
#include "mpcc/corpus.hpp"
#include "mpcc/indices.hpp"

using namespace mpcc;

namespace {

MpccProblem load(const std::string& name) {
  return MpccProblem::load_file(corpus_data_dir() + "/problems/" + name + ".json");
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(v.size());
  int i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("MPCC active sets at the marked points") {
  // 0-based index sets throughout the tests.
  ActivePattern p1 = mpcc_active(load("ndc4"), vec({0, 0, 1}), 1e-8);
  CHECK(p1.a01 == std::vector<int>{0, 1, 2});
  CHECK(p1.a10.empty());
  CHECK(p1.a00.empty());

  ActivePattern p2 = mpcc_active(load("ndc2fail"), vec({0, 0}), 1e-8);
  CHECK(p2.a00 == std::vector<int>{0});

  ActivePattern p3 = mpcc_active(load("continuum2"), vec({1, 0}), 1e-8);
  CHECK(p3.a10 == std::vector<int>{0});

  CHECK_THROWS_AS(mpcc_active(load("ndc4"), vec({1, 1, 1}), 1e-8),
                  InfeasiblePointError);
}

TEST_CASE("regularized active sets at the marked points") {
  MpccProblem p = load("ndc4");
  Regularization reg(RegKind::ScholtesInequality, 0.5);
  ActivePattern a = regularized_active(p, reg, vec({0.25, 0.25, 1}), 1e-8);
  CHECK(a.H == std::vector<int>{1});
  CHECK(a.N1 == std::vector<int>{2});
  CHECK(a.N2.empty());

  Regularization reg2(RegKind::ScholtesInequality, 0.25);
  ActivePattern b = regularized_active(p, reg2, vec({0.25, 0, 1}), 1e-8);
  CHECK(b.H == std::vector<int>{0, 1});
  CHECK(b.N1 == std::vector<int>{2});

  // Strict interior: nothing active.
  MpccProblem q = load("continuum2");
  Regularization reg3(RegKind::ScholtesInequality, 0.5);
  ActivePattern c = regularized_active(q, reg3, vec({1.0, 0.2}), 1e-8);
  CHECK(c.H.empty());
  CHECK(c.N1.empty());
  CHECK(c.N2.empty());

  // Equality smoothing: the product constraint is active by construction.
  Regularization eq(RegKind::EqualitySmoothing, 0.2);
  ActivePattern d = regularized_active(q, eq, vec({1.0, 0.2}), 1e-8);
  CHECK(d.H == std::vector<int>{0});
}

TEST_CASE("H and N sets are disjoint at feasible points with t > 0") {
  MpccProblem p = load("2min");
  Regularization reg(RegKind::ScholtesInequality, 0.25);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  int tested = 0;
  for (int it = 0; it < 500 && tested < 60; ++it) {
    Eigen::VectorXd x = vec({u(rng), u(rng), 1 + u(rng)});
    try {
      ActivePattern a = regularized_active(p, reg, x, 1e-8);
      ++tested;
      for (int j : a.H) {
        CHECK(!std::binary_search(a.N1.begin(), a.N1.end(), j));
        CHECK(!std::binary_search(a.N2.begin(), a.N2.end(), j));
      }
    } catch (const InfeasiblePointError&) {
    }
  }
  CHECK(tested > 0);
}

TEST_CASE("sign partition splits by multiplier sign") {
  ActivePattern pat;
  pat.a01 = {0, 1, 2};
  MpccMultipliers mult;
  mult.sigma1 = {{0, 0.0}, {1, -1.0}, {2, 2.0}};
  mult.w_stationary = true;
  SignPartition s = sign_partition(pat, mult, 1e-8);
  CHECK(s.a01_zero == std::vector<int>{0});
  CHECK(s.a01_minus == std::vector<int>{1});
  CHECK(s.a01_plus == std::vector<int>{2});

  ActivePattern pat2;
  pat2.a00 = {0};
  MpccMultipliers m2;
  m2.rho1 = {{0, -1.0}};
  m2.rho2 = {{0, -1.0}};
  SignPartition s2 = sign_partition(pat2, m2, 1e-8);
  CHECK(s2.a00_minus == std::vector<int>{0});
}

TEST_CASE("sign partition triples partition their active sets") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int it = 0; it < 200; ++it) {
    ActivePattern pat;
    MpccMultipliers mult;
    for (int j = 0; j < 6; ++j) {
      const int bucket = static_cast<int>(rng() % 3);
      double v = u(rng);
      if (rng() % 4 == 0) v = 0.0;
      if (bucket == 0) {
        pat.a01.push_back(j);
        mult.sigma1[j] = v;
      } else if (bucket == 1) {
        pat.a10.push_back(j);
        mult.sigma2[j] = v;
      } else {
        pat.a00.push_back(j);
        mult.rho1[j] = v;
        mult.rho2[j] = u(rng);
      }
    }
    SignPartition s = sign_partition(pat, mult, 1e-8);
    CHECK(s.a01_minus.size() + s.a01_zero.size() + s.a01_plus.size() ==
          pat.a01.size());
    CHECK(s.a10_minus.size() + s.a10_zero.size() + s.a10_plus.size() ==
          pat.a10.size());
    CHECK(s.a00_minus.size() + s.a00_zero.size() + s.a00_plus.size() ==
          pat.a00.size());
    auto disjoint = [](const std::vector<int>& a, const std::vector<int>& b) {
      for (int x : a)
        for (int y : b)
          if (x == y) return false;
      return true;
    };
    CHECK(disjoint(s.a00_minus, s.a00_zero));
    CHECK(disjoint(s.a00_minus, s.a00_plus));
    CHECK(disjoint(s.a00_zero, s.a00_plus));
  }
}

TEST_CASE("MPCC-LICQ at the marked points") {
  LicqResult r1 = check_mpcc_licq(load("ndc4"), vec({0, 0, 1}), 1e-10, 1e-8);
  CHECK(r1.holds);
  CHECK(r1.rank == 3);

  LicqResult r2 =
      check_mpcc_licq(load("continuum"), vec({0, 0, 1, 0}), 1e-10, 1e-8);
  CHECK(r2.holds);

  // Duplicating a complementarity pair produces identical active rows.
  MpccProblem dup = load("ndc2fail");
  nlohmann::json j = dup.to_json();
  j["kappa"] = 2;
  j["F1"].push_back(j["F1"][0]);
  j["F2"].push_back(j["F2"][0]);
  MpccProblem dup2 = MpccProblem::from_json(j);
  LicqResult r3 = check_mpcc_licq(dup2, vec({0, 0}), 1e-10, 1e-8);
  CHECK(!r3.holds);
}

TEST_CASE("LICQ for the regularization at the marked points") {
  MpccProblem p1 = load("ndc2fail");
  Regularization reg1(RegKind::ScholtesInequality, 0.25);
  LicqResult r1 = check_licq(p1, reg1, vec({0.5, 0.5}), 1e-10, 1e-8);
  CHECK(r1.holds);
  CHECK(r1.rows == 1);

  MpccProblem p2 = load("ndc4");
  Regularization reg2(RegKind::ScholtesInequality, 0.5);
  LicqResult r2 = check_licq(p2, reg2, vec({0.25, 0.25, 1}), 1e-10, 1e-8);
  CHECK(r2.holds);
  CHECK(r2.rows == 2);

  // Interior point: no active rows, vacuously true.
  MpccProblem p3 = load("continuum2");
  Regularization reg3(RegKind::ScholtesInequality, 0.5);
  LicqResult r3 = check_licq(p3, reg3, vec({1.0, 0.2}), 1e-10, 1e-8);
  CHECK(r3.holds);
  CHECK(r3.rows == 0);
}

TEST_CASE("LICQ is inherited near MPCC-LICQ points") {
  // Sample feasible points of the regularized set within 0.1*sqrt(t) of a
  // marked point satisfying MPCC-LICQ; LICQ must hold at all of them.
  for (const std::string& name : corpus_names()) {
    GoldenCase gc = corpus_load(name);
    for (const GoldenPoint& gp : gc.points) {
      if (gp.side != Side::Mpcc) continue;
      Eigen::VectorXd xbar(gc.problem.n);
      for (int i = 0; i < gc.problem.n; ++i) xbar(i) = gp.x[i].eval(0.1);
      if (!check_mpcc_licq(gc.problem, xbar, 1e-10, 1e-8).holds) continue;
      std::mt19937_64 rng(31);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (double t : {1e-2, 1e-4}) {
        Regularization reg(RegKind::ScholtesInequality, t);
        const double radius = 0.1 * std::sqrt(t);
        int found = 0;
        for (int it = 0; it < 400 && found < 20; ++it) {
          Eigen::VectorXd d(gc.problem.n);
          for (int i = 0; i < gc.problem.n; ++i) d(i) = gauss(rng);
          Eigen::VectorXd x = xbar + radius * d / d.norm();
          if (!feasible_regularized(gc.problem, reg, x, 1e-8).feasible) continue;
          ++found;
          CHECK(check_licq(gc.problem, reg, x, 1e-10, 1e-8).holds);
        }
        CHECK(found > 0);
      }
    }
  }
}
