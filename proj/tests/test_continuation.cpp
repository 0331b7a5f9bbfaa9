#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "mpcc/continuation.hpp"
#include "mpcc/corpus.hpp"
#include "mpcc/stationarity.hpp"

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

// Single strictly convex pair; the unique KKT point of the regularization
// sits at the unconstrained minimizer (1, 0).
MpccProblem convex_pair() {
  nlohmann::json j;
  j["name"] = "convex-pair";
  j["n"] = 2;
  j["kappa"] = 1;
  j["f"] = nlohmann::json::parse("[[1,[2,0]],[-2,[1,0]],[1,[0,0]],[1,[0,2]]]");
  j["F1"] = nlohmann::json::parse("[[[1,[1,0]]]]");
  j["F2"] = nlohmann::json::parse("[[[1,[0,1]]]]");
  return MpccProblem::from_json(j);
}

// ndc4 objective shifted so every non-biactive multiplier is nonzero.
MpccProblem derived_ndc4() {
  nlohmann::json j;
  j["name"] = "ndc4-shifted";
  j["n"] = 3;
  j["kappa"] = 3;
  j["f"] = nlohmann::json::parse(
      "[[-2,[1,0,0]],[-1,[0,1,0]],[2,[1,1,0]],[1,[0,0,2]]]");
  nlohmann::json base = load("ndc4").to_json();
  j["F1"] = base["F1"];
  j["F2"] = base["F2"];
  return MpccProblem::from_json(j);
}

}  // namespace

TEST_CASE("seeding: square-root placement of a biactive pair") {
  // Standard-form pair with rho = (-1, -1) lands at (sqrt(t), sqrt(t)).
  MpccProblem p = load("ndc2fail");
  Tolerances tol;
  Eigen::VectorXd xbar = vec({0, 0});
  MpccPointAnalysis a = mpcc_index_report(p, xbar, tol);
  MpccMultipliers mult = a.mult;
  mult.rho1[0] = -1.0;
  mult.rho2[0] = -1.0;
  SignPartition signs = sign_partition(a.pattern, mult, tol.zero);
  const double t = 1e-4;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed = seed_from_cstationary(p, reg, xbar, mult, signs, t);
  CHECK(seed.x0(0) == doctest::Approx(0.01));
  CHECK(seed.x0(1) == doctest::Approx(0.01));
  CHECK(seed.pattern.H == std::vector<int>{0});
}

TEST_CASE("seeding: pattern prediction and unassigned pairs") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  Eigen::VectorXd xbar = vec({0, 0, 1});
  MpccPointAnalysis a = mpcc_index_report(p, xbar, tol);
  const double t = 0.5;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed = seed_from_cstationary(p, reg, xbar, a.mult, a.signs, t);
  CHECK(seed.pattern.H == std::vector<int>{1});   // sigma < 0
  CHECK(seed.pattern.N1 == std::vector<int>{2});  // sigma > 0
  CHECK(seed.pattern.N2.empty());
  CHECK(seed.unassigned == std::vector<int>{0});  // sigma = 0 left open
}

TEST_CASE("seeding: all multipliers positive leaves the point in place") {
  // Corner problem f = x1 + x2 with one biactive pair, rho = (1, 1).
  Tolerances tol;
  nlohmann::json j;
  j["name"] = "corner";
  j["n"] = 2;
  j["kappa"] = 1;
  j["f"] = nlohmann::json::parse("[[1,[1,0]],[1,[0,1]]]");
  j["F1"] = nlohmann::json::parse("[[[1,[1,0]]]]");
  j["F2"] = nlohmann::json::parse("[[[1,[0,1]]]]");
  MpccProblem corner = MpccProblem::from_json(j);
  Eigen::VectorXd xbar = vec({0, 0});
  MpccPointAnalysis a = mpcc_index_report(corner, xbar, tol);
  REQUIRE(a.signs.a00_plus == std::vector<int>{0});
  const double t = 0.01;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed = seed_from_cstationary(corner, reg, xbar, a.mult, a.signs, t);
  CHECK((seed.x0 - xbar).norm() == doctest::Approx(0.0));
  CHECK(seed.pattern.H.empty());
  CHECK(seed.pattern.N1 == std::vector<int>{0});
  CHECK(seed.pattern.N2 == std::vector<int>{0});
}

TEST_CASE("seeding: vanishing biactive product is an error") {
  MpccProblem p = load("ndc2fail");
  Tolerances tol;
  Eigen::VectorXd xbar = vec({0, 0});
  MpccPointAnalysis a = mpcc_index_report(p, xbar, tol);  // rho = (0,0)
  Regularization reg(RegKind::ScholtesInequality, 0.01);
  CHECK_THROWS_AS(
      seed_from_cstationary(p, reg, xbar, a.mult, a.signs, 0.01), SeedError);
}

TEST_CASE("corrector lands on the closed-form KKT point") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  const double t = 0.5;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed;
  seed.x0 = vec({0.2, 0.3, 1.05});
  seed.pattern.side = Side::Regularized;
  seed.pattern.H = {1};
  seed.pattern.N1 = {2};
  NewtonResult nr = newton_kkt(p, reg, seed, tol);
  REQUIRE(nr.ok());
  CHECK((nr.x - vec({0.25, 0.25, 1})).norm() <= 1e-9);
  CHECK(nr.mult.eta.at(1) == doctest::Approx(0.5));
  CHECK(nr.mult.nu1.at(2) == doctest::Approx(1.75));
}

TEST_CASE("corrector returns an exact seed immediately") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  const double t = 0.5;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed;
  seed.x0 = vec({0.25, 0.25, 1});
  seed.pattern.side = Side::Regularized;
  seed.pattern.H = {1};
  seed.pattern.N1 = {2};
  NewtonResult nr = newton_kkt(p, reg, seed, tol);
  REQUIRE(nr.ok());
  CHECK(nr.iterations <= 1);
  CHECK((nr.x - seed.x0).norm() <= 1e-12);
}

TEST_CASE("corrector from a nearby user seed picks the adjacent branch") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  const double t = 0.25;
  Regularization reg(RegKind::ScholtesInequality, t);
  KktSeed seed = seed_from_point(p, reg, vec({0.01, 0.24, 1}), t);
  NewtonResult nr = newton_kkt(p, reg, seed, tol);
  REQUIRE(nr.ok());
  CHECK((nr.x - vec({0, 0.25, 1})).norm() <= 1e-9);
  CHECK(nr.mult.nu1.at(0) == doctest::Approx(2 * t));      // 0.5
  CHECK(nr.mult.nu1.at(2) == doctest::Approx(2 - t));      // 1.75
}

TEST_CASE("trace: index shift on the saddle-to-minimizer path") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  PathTrace tr = trace_path(p, RegKind::ScholtesInequality,
                            vec({0.25, 0.25, 1}), 0.5, 0.5, 1e-6, tol);
  CHECK(tr.verdict == TraceVerdict::ConvergedNondegenerate);
  for (const TraceRecord& r : tr.records) {
    CHECK(r.analysis.report.qi == 1);
    CHECK(r.analysis.report.nondegenerate());
  }
  REQUIRE(tr.limit_point.has_value());
  CHECK((*tr.limit_point - vec({0, 0, 1})).norm() <= 1e-6);
  REQUIRE(tr.limit_analysis.has_value());
  REQUIRE(tr.limit_analysis->report.ci.has_value());
  CHECK(*tr.limit_analysis->report.ci == 0);
  REQUIRE(tr.shift.has_value());
  CHECK(*tr.shift == 1);
  CHECK(tr.I0 == std::vector<int>{1});
}

TEST_CASE("trace: degenerate limit is reported as such") {
  MpccProblem p = load("ndc2fail");
  Tolerances tol;
  const double t0 = 0.25;
  PathTrace tr = trace_path(p, RegKind::ScholtesInequality,
                            vec({std::sqrt(t0), std::sqrt(t0)}), t0, 0.5, 1e-6,
                            tol);
  CHECK(tr.verdict == TraceVerdict::ConvergedDegenerate);
  for (const TraceRecord& r : tr.records) CHECK(r.analysis.report.qi == 1);
  REQUIRE(tr.limit_point.has_value());
  CHECK(tr.limit_point->norm() <= 1e-6);
  REQUIRE(tr.limit_analysis.has_value());
  CHECK_FALSE((*tr.limit_analysis->report.ndc)[1]);
  CHECK(!tr.limit_analysis->report.ci.has_value());
  CHECK(!tr.shift.has_value());
}

TEST_CASE("trace: constant path at a strictly interior minimizer") {
  // Unconstrained minimizer with a tiny positive product: interior of the
  // regularized set for every sampled t, so the path never moves.
  const double a = 1e-5;
  nlohmann::json j;
  j["name"] = "interior";
  j["n"] = 2;
  j["kappa"] = 1;
  std::ostringstream f;
  f << "[[1,[2,0]],[" << -2 * a << ",[1,0]],[1,[0,2]],[" << -2 * a << ",[0,1]]]";
  j["f"] = nlohmann::json::parse(f.str());
  j["F1"] = nlohmann::json::parse("[[[1,[1,0]]]]");
  j["F2"] = nlohmann::json::parse("[[[1,[0,1]]]]");
  MpccProblem p = MpccProblem::from_json(j);
  Tolerances tol;
  PathTrace tr = trace_path(p, RegKind::ScholtesInequality, vec({a, a}), 0.5,
                            0.5, 1e-7, tol);
  CHECK(tr.verdict == TraceVerdict::ConvergedNondegenerate);
  for (const TraceRecord& r : tr.records)
    CHECK((r.x - vec({a, a})).norm() <= 1e-10);
  REQUIRE(tr.shift.has_value());
  CHECK(*tr.shift == 0);
}

TEST_CASE("trace rejects bad schedules and non-KKT starts") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  CHECK_THROWS_AS(trace_path(p, RegKind::ScholtesInequality, vec({0.25, 0.25, 1}),
                             0.5, 1.0, 1e-6, tol),
                  InputError);
  CHECK_THROWS_AS(trace_path(p, RegKind::ScholtesInequality, vec({0.1, 0.2, 1.1}),
                             0.5, 0.5, 1e-6, tol),
                  std::exception);
}

TEST_CASE("limit multipliers follow the product-active branch formulas") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  PathTrace tr = trace_path(p, RegKind::ScholtesInequality,
                            vec({0.25, 0.25, 1}), 0.5, 0.5, 1e-6, tol);
  REQUIRE(tr.limit_analysis.has_value());
  LimitMultiplierEstimate lm = limit_multipliers(p, tr, tol);
  // j = 2 in I0 uses -eta * F2 -> -1 + O(t); j = 3 uses nu -> 2 + O(t).
  CHECK(lm.estimate.sigma1.at(1) == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(lm.estimate.sigma1.at(2) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(lm.estimate.sigma1.at(0) == doctest::Approx(0.0));
  CHECK(lm.discrepancy <= 1e-5);
  // O(t) decay: successive discrepancies shrink by roughly gamma.
  REQUIRE(lm.tail_discrepancies.size() == 3);
  for (size_t k = 1; k < lm.tail_discrepancies.size(); ++k) {
    const double ratio = lm.tail_discrepancies[k] / lm.tail_discrepancies[k - 1];
    CHECK(ratio <= 3 * 0.5);
    CHECK(ratio >= 0.5 / 3);
  }
}

TEST_CASE("limit multipliers of a degenerate biactive limit vanish") {
  MpccProblem p = load("ndc2fail");
  Tolerances tol;
  const double t0 = 0.25;
  PathTrace tr = trace_path(p, RegKind::ScholtesInequality,
                            vec({std::sqrt(t0), std::sqrt(t0)}), t0, 0.5, 1e-8,
                            tol);
  REQUIRE(tr.limit_analysis.has_value());
  LimitMultiplierEstimate lm = limit_multipliers(p, tr, tol);
  CHECK(std::abs(lm.estimate.rho1.at(0)) <= 2e-4);  // -eta*F2 = O(sqrt(t))
  CHECK(std::abs(lm.estimate.rho2.at(0)) <= 2e-4);
}

TEST_CASE("multistart: two distinct minimizer branches") {
  MpccProblem p = load("2min");
  Tolerances tol;
  const double t = 0.25;
  Regularization reg(RegKind::ScholtesInequality, t);
  MultistartResult ms =
      multistart_kkt(p, reg, vec({0, 0, 1}), 0.5, 64, 12345, tol);
  REQUIRE(ms.clusters.size() >= 2);
  // Both closed-form branches are among the clusters.
  bool found_tilde = false, found_hat = false;
  for (const auto& c : ms.clusters) {
    if ((c.x - vec({0, t, 1})).norm() <= 1e-7) found_tilde = true;
    if ((c.x - vec({t, 0, 1})).norm() <= 1e-7) found_hat = true;
  }
  CHECK(found_tilde);
  CHECK(found_hat);
}

TEST_CASE("multistart: continuum of KKT points raises the flag") {
  MpccProblem p = load("continuum");
  Tolerances tol;
  Regularization reg(RegKind::ScholtesInequality, 0.1);
  MultistartResult ms =
      multistart_kkt(p, reg, vec({0, 0, 1, 0}), 0.5, 256, 777, tol);
  CHECK(ms.clusters.size() >= 10);
  CHECK(ms.continuum_flag);
}

TEST_CASE("multistart: strictly convex single pair yields one cluster") {
  MpccProblem p = convex_pair();
  Tolerances tol;
  const double t = 0.05;
  Regularization reg(RegKind::ScholtesInequality, t);
  MultistartResult ms = multistart_kkt(p, reg, vec({1, 0}), 0.6, 64, 999, tol);
  REQUIRE(ms.clusters.size() == 1);
  CHECK((ms.clusters[0].x - vec({1, 0})).norm() <= 1e-8);

  // Grid-search oracle: the KKT residual vanishes nowhere else in the box.
  int stationary_cells = 0;
  for (double x1 = 0.0; x1 <= 2.0; x1 += 0.05) {
    for (double x2 = 0.0; x2 <= 2.0; x2 += 0.05) {
      Eigen::VectorXd x = vec({x1, x2});
      if (!feasible_regularized(p, reg, x, 1e-8).feasible) continue;
      ActivePattern pat = regularized_active(p, reg, x, 1e-6);
      KktMultipliers m = recover_kkt_multipliers(p, reg, x, pat, tol);
      if (m.kkt) ++stationary_cells;
    }
  }
  CHECK(stationary_cells == 1);
}

TEST_CASE("multistart: count 1 around an exact KKT point") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  Regularization reg(RegKind::ScholtesInequality, 0.5);
  MultistartResult ms =
      multistart_kkt(p, reg, vec({0.25, 0.25, 1}), 0.05, 1, 4321, tol);
  CHECK(ms.clusters.size() <= 1);
}

TEST_CASE("well-posedness on the derived NDC4-satisfying instance") {
  MpccProblem p = derived_ndc4();
  Tolerances tol;
  // Confirm NDC4 first via the least-squares recomputation.
  MpccPointAnalysis a = mpcc_index_report(p, vec({0, 0, 1}), tol);
  REQUIRE((*a.report.ndc)[3]);
  WellposednessReport rep = wellposedness_check(
      p, RegKind::ScholtesInequality, vec({0, 0, 1}), {1e-2, 1e-4}, tol);
  CHECK(rep.ci == 0);
  REQUIRE(rep.results.size() == 2);
  for (const auto& r : rep.results) {
    CHECK(r.pass);
    CHECK(r.newton_converged);
    CHECK(r.newton_iterations <= 10);
    CHECK(r.nd_ok);
    CHECK(r.qi == rep.ci);
    CHECK(r.unique);
  }
}

TEST_CASE("well-posedness for the equality smoothing without NDC4") {
  MpccProblem p = load("continuum2");
  Tolerances tol;
  WellposednessReport rep = wellposedness_check(
      p, RegKind::EqualitySmoothing, vec({1, 0}), {1e-1, 1e-2}, tol);
  REQUIRE(rep.results.size() == 2);
  for (const auto& r : rep.results) {
    CHECK(r.pass);
    CHECK((r.x - vec({1, r.t})).norm() <= 1e-8);
  }
}

TEST_CASE("well-posedness refuses the inequality variant when NDC4 fails") {
  MpccProblem p = load("ndc4");
  Tolerances tol;
  try {
    wellposedness_check(p, RegKind::ScholtesInequality, vec({0, 0, 1}),
                        {1e-2}, tol);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.failed_flag == "NDC4");
  }
}
