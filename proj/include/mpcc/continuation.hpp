// Seeding, Newton correction, and path tracing of KKT points of the
// regularization as t decreases to zero; detection of index shift,
// bifurcation, and continua; estimation of the limiting MPCC multipliers.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mpcc/indices.hpp"
#include "mpcc/problem.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

struct KktSeed {
  enum class Source { FromCStationary, FromPreviousStep, User };
  Eigen::VectorXd x0;
  ActivePattern pattern;
  Source source = Source::User;
  // Pairs whose vanishing non-biactive multiplier leaves the predicted
  // pattern open; they are seeded in place and left inactive.
  std::vector<int> unassigned;
};

// Builds a KKT seed at parameter t from a C-stationary point with its
// multipliers and sign partition.  Biactive pairs are displaced onto the
// product boundary via the square-root placement, negative non-biactive
// pairs onto F1*F2 = t along the active factor; displacements are mapped
// through a minimum-norm solve against the active constraint gradients.
// Throws SeedError when a biactive pair has rho1*rho2 <= 0.
KktSeed seed_from_cstationary(const MpccProblem& prob, const Regularization& reg,
                              const Eigen::VectorXd& xbar,
                              const MpccMultipliers& mult,
                              const SignPartition& signs, double t);

// Heuristic seed at an arbitrary point: each pair is assigned to H, N1, N2
// or left inactive from its relative position in the feasible slab.
KktSeed seed_from_point(const MpccProblem& prob, const Regularization& reg,
                        const Eigen::VectorXd& x, double t);

struct NewtonResult {
  enum class Status {
    Converged,
    MaxIterations,
    SingularJacobian,
    PatternOscillation,
    Rejected,  // converged but failed feasibility/sign verification
  };
  Status status = Status::MaxIterations;
  Eigen::VectorXd x;
  KktMultipliers mult;       // independently recovered at the final pattern
  ActivePattern pattern;     // detected at the solution
  int iterations = 0;
  int pattern_retries = 0;
  double residual = 0.0;
  bool ok() const { return status == Status::Converged; }
};

const char* to_string(NewtonResult::Status s);

// Newton corrector for the KKT system with the seed's active pattern held
// fixed: stationarity plus the active constraints as equalities.  Steps are
// minimum-norm, so rank-deficient systems (continua of solutions) are still
// correctable.  After convergence the full KKT conditions are verified at
// the detected active pattern; on a sign or feasibility violation the
// pattern is re-estimated and the solve retried at most 3 times.
NewtonResult newton_kkt(const MpccProblem& prob, const Regularization& reg,
                        const KktSeed& seed, const Tolerances& tol,
                        int maxIter = 50);

struct TraceRecord {
  double t = 0.0;
  Eigen::VectorXd x;
  KktPointAnalysis analysis;
};

enum class TraceVerdict {
  ConvergedNondegenerate,
  ConvergedDegenerate,
  Diverged,
  BifurcationSuspected,
};

const char* to_string(TraceVerdict v);

struct PathTrace {
  RegKind kind = RegKind::ScholtesInequality;
  double t0 = 0.0, gamma = 0.5, tmin = 1e-8;
  std::vector<TraceRecord> records;
  std::vector<int> I0;  // pairs product-active at every record with t <= sqrt(t0)
  std::optional<Eigen::VectorXd> limit_point;
  std::optional<MpccPointAnalysis> limit_analysis;
  std::optional<int> shift;  // qi at the smallest t minus ci at the limit
  TraceVerdict verdict = TraceVerdict::Diverged;
  std::string note;
};

// Traces KKT points from (start, t0) with the geometric schedule t <- gamma*t
// until tmin, records index reports along the way, extrapolates the limit
// point, and analyzes it on the MPCC side.  The start must be a KKT point at
// t0 (throws NotStationaryError otherwise).
PathTrace trace_path(const MpccProblem& prob, RegKind kind,
                     const Eigen::VectorXd& start, double t0, double gamma,
                     double tmin, const Tolerances& tol);

struct LimitMultiplierEstimate {
  MpccMultipliers estimate;  // from the tail record of the trace
  double discrepancy = 0.0;  // vs direct recovery at the limit point
  // Discrepancies of the last records (oldest first), for rate checks.
  std::vector<double> tail_discrepancies;
};

// Limiting MPCC multipliers estimated from the regularized ones: pairs in I0
// use -eta * F2 (resp. -eta * F1), the rest use nu.  Requires a trace whose
// limit analysis succeeded.
LimitMultiplierEstimate limit_multipliers(const MpccProblem& prob,
                                          const PathTrace& trace,
                                          const Tolerances& tol);

struct MultistartResult {
  struct Cluster {
    Eigen::VectorXd x;
    int hits = 0;
    double objective = 0.0;
    KktPointAnalysis analysis;
  };
  std::vector<Cluster> clusters;
  bool continuum_flag = false;
  std::uint64_t seed = 0;
  int attempts = 0;
  int converged = 0;
};

// Runs the corrector from `count` uniform random seeds in the ball around
// `center`, clusters the verified KKT points at distance sepTol, and raises
// the continuum flag when at least 10 distinct solutions share the objective
// value to 1e-8 and one of them is degenerate.
MultistartResult multistart_kkt(const MpccProblem& prob, const Regularization& reg,
                                const Eigen::VectorXd& center, double radius,
                                int count, std::uint64_t seed,
                                const Tolerances& tol);

struct WellposednessReport {
  struct PerT {
    double t = 0.0;
    bool pass = false;
    bool newton_converged = false;
    int newton_iterations = 0;
    bool nd_ok = false;
    int qi = -1;
    bool index_match = false;
    int clusters = 0;
    bool unique = false;
    Eigen::VectorXd x;
    std::string note;
  };
  int ci = 0;
  std::vector<PerT> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return !results.empty();
  }
};

// For each t: seed from the C-stationary point, correct, verify ND1-ND3,
// compare the quadratic index against the C-index of xbar, and verify local
// uniqueness by multistart.  Requires NDC1-NDC3 at xbar, plus NDC4 for the
// inequality variant; throws PreconditionError naming the failed flag.
WellposednessReport wellposedness_check(const MpccProblem& prob, RegKind kind,
                                        const Eigen::VectorXd& xbar,
                                        const std::vector<double>& tList,
                                        const Tolerances& tol, int msCount = 64,
                                        double msRadius = 0.3,
                                        std::uint64_t msSeed = 20240901ULL);

}  // namespace mpcc
