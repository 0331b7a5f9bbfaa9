#include "mpcc/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "mpcc/stationarity.hpp"

namespace mpcc {

namespace {

std::vector<int> sorted_union(std::initializer_list<const std::vector<int>*> sets) {
  std::set<int> u;
  for (const auto* s : sets) u.insert(s->begin(), s->end());
  return {u.begin(), u.end()};
}

bool contains(const std::vector<int>& v, int j) {
  return std::binary_search(v.begin(), v.end(), j);
}

void insert_sorted(std::vector<int>& v, int j) {
  auto it = std::lower_bound(v.begin(), v.end(), j);
  if (it == v.end() || *it != j) v.insert(it, j);
}

void erase_value(std::vector<int>& v, int j) {
  v.erase(std::remove(v.begin(), v.end(), j), v.end());
}

}  // namespace

KktSeed seed_from_cstationary(const MpccProblem& prob, const Regularization& reg,
                              const Eigen::VectorXd& xbar,
                              const MpccMultipliers& mult,
                              const SignPartition& signs, double t) {
  prob.check_dimension(xbar);
  if (t <= 0.0) throw InputError("seed needs t > 0");
  const bool equality = reg.kind == RegKind::EqualitySmoothing;

  const std::vector<int> a01 =
      sorted_union({&signs.a01_minus, &signs.a01_zero, &signs.a01_plus});
  const std::vector<int> a10 =
      sorted_union({&signs.a10_minus, &signs.a10_zero, &signs.a10_plus});
  const std::vector<int> a00 =
      sorted_union({&signs.a00_minus, &signs.a00_zero, &signs.a00_plus});

  // Target values for the active constraint functions at the seed.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> targets;
  auto push = [&](const Eigen::VectorXd& g, double current, double target) {
    rows.push_back(g);
    targets.push_back(target - current);
  };

  for (int j : a01) {
    const double f2 = prob.F2[j].value(xbar);
    double target = 0.0;
    if (equality || contains(signs.a01_minus, j)) target = t / f2;
    push(prob.F1[j].gradient(xbar), prob.F1[j].value(xbar), target);
  }
  for (int j : a10) {
    const double f1 = prob.F1[j].value(xbar);
    double target = 0.0;
    if (equality || contains(signs.a10_minus, j)) target = t / f1;
    push(prob.F2[j].gradient(xbar), prob.F2[j].value(xbar), target);
  }
  for (int j : a00) {
    const double r1 = mult.rho1.count(j) ? mult.rho1.at(j) : 0.0;
    const double r2 = mult.rho2.count(j) ? mult.rho2.at(j) : 0.0;
    if (r1 * r2 <= 0.0)
      throw SeedError("biactive pair " + std::to_string(j + 1) +
                      " has rho1*rho2 <= 0; the square-root placement is "
                      "undefined (NDC2 fails)");
    double t1 = 0.0, t2 = 0.0;
    if (equality || contains(signs.a00_minus, j)) {
      const double s = std::sqrt(r1 * r2);
      t1 = std::abs(r2) * std::sqrt(t) / s;
      t2 = std::abs(r1) * std::sqrt(t) / s;
    }
    push(prob.F1[j].gradient(xbar), prob.F1[j].value(xbar), t1);
    push(prob.F2[j].gradient(xbar), prob.F2[j].value(xbar), t2);
  }

  KktSeed seed;
  seed.source = KktSeed::Source::FromCStationary;
  seed.x0 = xbar;
  if (!rows.empty()) {
    Eigen::MatrixXd G(rows.size(), prob.n);
    Eigen::VectorXd dv(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      G.row(static_cast<int>(i)) = rows[i];
      dv(static_cast<int>(i)) = targets[i];
    }
    seed.x0 += G.completeOrthogonalDecomposition().solve(dv);
  }

  ActivePattern& p = seed.pattern;
  p.side = Side::Regularized;
  if (equality) {
    for (int j = 0; j < prob.kappa; ++j) p.H.push_back(j);
  } else {
    p.H = sorted_union({&signs.a01_minus, &signs.a10_minus, &signs.a00_minus});
    p.N1 = sorted_union({&signs.a01_plus, &signs.a00_plus});
    p.N2 = sorted_union({&signs.a10_plus, &signs.a00_plus});
    seed.unassigned = sorted_union({&signs.a01_zero, &signs.a10_zero});
  }
  return seed;
}

KktSeed seed_from_point(const MpccProblem& prob, const Regularization& reg,
                        const Eigen::VectorXd& x, double t) {
  prob.check_dimension(x);
  KktSeed seed;
  seed.source = KktSeed::Source::User;
  seed.x0 = x;
  seed.pattern.side = Side::Regularized;
  if (reg.kind == RegKind::EqualitySmoothing) {
    for (int j = 0; j < prob.kappa; ++j) seed.pattern.H.push_back(j);
    return seed;
  }
  for (int j = 0; j < prob.kappa; ++j) {
    const double f1 = prob.F1[j].value(x);
    const double f2 = prob.F2[j].value(x);
    const double u = f1 * f2 / t;  // relative position in the feasible slab
    if (u >= 0.75)
      seed.pattern.H.push_back(j);
    else if (u <= 0.25) {
      if (std::abs(f1) <= std::abs(f2))
        seed.pattern.N1.push_back(j);
      else
        seed.pattern.N2.push_back(j);
    }
  }
  return seed;
}

const char* to_string(NewtonResult::Status s) {
  switch (s) {
    case NewtonResult::Status::Converged: return "converged";
    case NewtonResult::Status::MaxIterations: return "max-iterations";
    case NewtonResult::Status::SingularJacobian: return "singular-jacobian";
    case NewtonResult::Status::PatternOscillation: return "pattern-oscillation";
    case NewtonResult::Status::Rejected: return "rejected";
  }
  return "?";
}

namespace {

// One corrector run with a fixed active pattern.  Unknowns are x plus the
// multipliers supported on the pattern; equations are stationarity plus the
// pattern constraints as equalities.
struct FixedPatternSolve {
  bool converged = false;
  bool rank_deficient = false;
  Eigen::VectorXd x;
  KktMultipliers mult;
  int iterations = 0;
  double residual = 0.0;
};

FixedPatternSolve solve_fixed_pattern(const MpccProblem& prob,
                                      const Regularization& reg,
                                      const ActivePattern& pattern,
                                      const Eigen::VectorXd& x0,
                                      const Tolerances& tol, int maxIter) {
  const int n = prob.n;
  const int mH = static_cast<int>(pattern.H.size());
  const int m1 = static_cast<int>(pattern.N1.size());
  const int m2 = static_cast<int>(pattern.N2.size());
  const int m = mH + m1 + m2;

  FixedPatternSolve out;
  out.x = x0;
  // Starting multipliers from the stationarity least squares at x0.
  {
    Eigen::MatrixXd A(n, m);
    int c = 0;
    for (int j : pattern.H) A.col(c++) = -prob.product_gradient(j, x0);
    for (int j : pattern.N1) A.col(c++) = prob.F1[j].gradient(x0);
    for (int j : pattern.N2) A.col(c++) = prob.F2[j].gradient(x0);
    Eigen::VectorXd lam = m == 0 ? Eigen::VectorXd(0)
                                 : Eigen::VectorXd(A.completeOrthogonalDecomposition()
                                                       .solve(prob.f.gradient(x0)));
    c = 0;
    for (int j : pattern.H) out.mult.eta[j] = lam(c++);
    for (int j : pattern.N1) out.mult.nu1[j] = lam(c++);
    for (int j : pattern.N2) out.mult.nu2[j] = lam(c++);
  }

  auto residual_of = [&](const Eigen::VectorXd& x, const KktMultipliers& mu,
                         Eigen::VectorXd& r) {
    r.resize(n + m);
    Eigen::VectorXd rs = prob.f.gradient(x);
    for (int j : pattern.H) rs += mu.eta.at(j) * prob.product_gradient(j, x);
    for (int j : pattern.N1) rs -= mu.nu1.at(j) * prob.F1[j].gradient(x);
    for (int j : pattern.N2) rs -= mu.nu2.at(j) * prob.F2[j].gradient(x);
    r.head(n) = rs;
    int c = n;
    for (int j : pattern.H) r(c++) = prob.product_value(j, x) - reg.t;
    for (int j : pattern.N1) r(c++) = prob.F1[j].value(x);
    for (int j : pattern.N2) r(c++) = prob.F2[j].value(x);
  };

  Eigen::VectorXd r;
  double prev_norm = std::numeric_limits<double>::infinity();
  int bad_steps = 0;
  for (out.iterations = 0; out.iterations <= maxIter; ++out.iterations) {
    residual_of(out.x, out.mult, r);
    out.residual = r.lpNorm<Eigen::Infinity>();
    const double gate = tol.newton * (1.0 + prob.f.gradient(out.x).lpNorm<Eigen::Infinity>());
    if (out.residual <= gate) {
      out.converged = true;
      return out;
    }
    if (out.iterations == maxIter) break;
    if (!std::isfinite(out.residual) || out.residual > 1e12) break;
    if (out.residual > prev_norm) {
      if (++bad_steps >= 3) break;
    } else {
      bad_steps = 0;
    }
    prev_norm = out.residual;

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + m, n + m);
    J.topLeftCorner(n, n) = scholtes_lagrangian_hessian(prob, out.x, out.mult, pattern);
    int c = n;
    for (int j : pattern.H) {
      const Eigen::VectorXd g = prob.product_gradient(j, out.x);
      J.block(0, c, n, 1) = g;
      J.block(c, 0, 1, n) = g.transpose();
      ++c;
    }
    for (int j : pattern.N1) {
      const Eigen::VectorXd g = prob.F1[j].gradient(out.x);
      J.block(0, c, n, 1) = -g;
      J.block(c, 0, 1, n) = g.transpose();
      ++c;
    }
    for (int j : pattern.N2) {
      const Eigen::VectorXd g = prob.F2[j].gradient(out.x);
      J.block(0, c, n, 1) = -g;
      J.block(c, 0, 1, n) = g.transpose();
      ++c;
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
    cod.setThreshold(tol.rank);
    if (cod.rank() < n + m) out.rank_deficient = true;
    const Eigen::VectorXd step = cod.solve(-r);
    if (!step.allFinite() || step.norm() > 1e8) break;
    out.x += step.head(n);
    int k = n;
    for (int j : pattern.H) out.mult.eta[j] += step(k++);
    for (int j : pattern.N1) out.mult.nu1[j] += step(k++);
    for (int j : pattern.N2) out.mult.nu2[j] += step(k++);
  }
  return out;
}

}  // namespace

NewtonResult newton_kkt(const MpccProblem& prob, const Regularization& reg,
                        const KktSeed& seed, const Tolerances& tol, int maxIter) {
  NewtonResult res;
  ActivePattern pattern = seed.pattern;
  pattern.side = Side::Regularized;
  Eigen::VectorXd x = seed.x0;
  std::vector<ActivePattern> visited;

  for (int retry = 0; retry <= 3; ++retry) {
    visited.push_back(pattern);
    FixedPatternSolve fp = solve_fixed_pattern(prob, reg, pattern, x, tol, maxIter);
    res.iterations += fp.iterations;
    res.pattern_retries = retry;
    res.x = fp.x;
    res.residual = fp.residual;
    if (!fp.converged) {
      res.status = fp.rank_deficient ? NewtonResult::Status::SingularJacobian
                                     : NewtonResult::Status::MaxIterations;
      return res;
    }

    // Verify the full KKT conditions at the detected active pattern,
    // independently of the corrector state.
    FeasibilityResult feas = feasible_regularized(prob, reg, fp.x, tol.feas);
    const double z = effective_zero_tol(fp.mult, tol.zero);
    bool signs_ok = true;
    if (reg.kind == RegKind::ScholtesInequality)
      for (const auto& [j, v] : fp.mult.eta) signs_ok = signs_ok && v >= -z;
    for (const auto& [j, v] : fp.mult.nu1) signs_ok = signs_ok && v >= -z;
    for (const auto& [j, v] : fp.mult.nu2) signs_ok = signs_ok && v >= -z;

    if (feas.feasible && signs_ok) {
      ActivePattern detected = regularized_active(prob, reg, fp.x, tol.feas);
      KktMultipliers mult = recover_kkt_multipliers(prob, reg, fp.x, detected, tol);
      if (mult.kkt) {
        res.status = NewtonResult::Status::Converged;
        res.pattern = detected;
        res.mult = mult;
        return res;
      }
    }

    // Re-estimate the pattern: drop constraints with negative multipliers,
    // activate violated ones.
    ActivePattern next = pattern;
    if (reg.kind == RegKind::ScholtesInequality)
      for (const auto& [j, v] : fp.mult.eta)
        if (v < -z) erase_value(next.H, j);
    for (const auto& [j, v] : fp.mult.nu1)
      if (v < -z) erase_value(next.N1, j);
    for (const auto& [j, v] : fp.mult.nu2)
      if (v < -z) erase_value(next.N2, j);
    for (const ConstraintResidual& c : feas.residuals) {
      if (reg.kind == RegKind::ScholtesInequality &&
          c.product - reg.t > tol.feas * (1.0 + reg.t) && !contains(next.H, c.j))
        insert_sorted(next.H, c.j);
      if (c.f1 < -tol.feas * (1.0 + std::abs(c.f1)) && !contains(next.N1, c.j))
        insert_sorted(next.N1, c.j);
      if (c.f2 < -tol.feas * (1.0 + std::abs(c.f2)) && !contains(next.N2, c.j))
        insert_sorted(next.N2, c.j);
    }
    bool seen = false;
    for (const auto& p : visited) seen = seen || p == next;
    if (seen) {
      res.status = NewtonResult::Status::Rejected;
      return res;
    }
    pattern = next;
    x = fp.x;
  }
  res.status = NewtonResult::Status::PatternOscillation;
  return res;
}

const char* to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::ConvergedNondegenerate: return "converged-nondegenerate";
    case TraceVerdict::ConvergedDegenerate: return "converged-degenerate";
    case TraceVerdict::Diverged: return "diverged";
    case TraceVerdict::BifurcationSuspected: return "bifurcation-suspected";
  }
  return "?";
}

namespace {

// Projects a point onto the MPCC feasible set by Gauss-Newton on the
// constraint functions detected active at `snapTol`.
Eigen::VectorXd snap_to_mpcc(const MpccProblem& prob, const Eigen::VectorXd& y,
                             double snapTol) {
  std::vector<int> act1, act2;
  for (int j = 0; j < prob.kappa; ++j) {
    const double f1 = prob.F1[j].value(y), f2 = prob.F2[j].value(y);
    if (std::abs(f1) <= snapTol * (1.0 + std::abs(f1))) act1.push_back(j);
    if (std::abs(f2) <= snapTol * (1.0 + std::abs(f2))) act2.push_back(j);
  }
  Eigen::VectorXd x = y;
  if (act1.empty() && act2.empty()) return x;
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd g(act1.size() + act2.size());
    Eigen::MatrixXd G(g.size(), prob.n);
    int r = 0;
    for (int j : act1) {
      g(r) = prob.F1[j].value(x);
      G.row(r++) = prob.F1[j].gradient(x);
    }
    for (int j : act2) {
      g(r) = prob.F2[j].value(x);
      G.row(r++) = prob.F2[j].gradient(x);
    }
    if (g.lpNorm<Eigen::Infinity>() <= 1e-14) break;
    const Eigen::VectorXd step = G.completeOrthogonalDecomposition().solve(-g);
    if (!step.allFinite()) break;
    x += step;
    if (step.norm() <= 1e-15) break;
  }
  return x;
}

}  // namespace

PathTrace trace_path(const MpccProblem& prob, RegKind kind,
                     const Eigen::VectorXd& start, double t0, double gamma,
                     double tmin, const Tolerances& tol) {
  if (t0 <= 0.0) throw InputError("trace needs t0 > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("trace needs 0 < gamma < 1");
  if (!(tmin > 0.0 && tmin <= t0)) throw InputError("trace needs 0 < tmin <= t0");

  PathTrace trace;
  trace.kind = kind;
  trace.t0 = t0;
  trace.gamma = gamma;
  trace.tmin = tmin;

  // The start must already be a KKT point at t0.
  {
    Regularization reg(kind, t0);
    TraceRecord rec;
    rec.t = t0;
    rec.x = start;
    rec.analysis = kkt_index_report(prob, reg, start, tol);
    trace.records.push_back(std::move(rec));
  }

  bool corrector_failed = false;
  for (double t = gamma * t0; t >= tmin * (1.0 - 1e-12); t *= gamma) {
    Regularization reg(kind, t);
    KktSeed seed;
    seed.source = KktSeed::Source::FromPreviousStep;
    seed.x0 = trace.records.back().x;
    seed.pattern = trace.records.back().analysis.pattern;
    NewtonResult nr = newton_kkt(prob, reg, seed, tol);
    if (!nr.ok()) {
      corrector_failed = true;
      trace.note = std::string("corrector failed at t = ") + std::to_string(t) +
                   " (" + to_string(nr.status) + ")";
      break;
    }
    TraceRecord rec;
    rec.t = t;
    rec.x = nr.x;
    try {
      rec.analysis = kkt_index_report(prob, reg, nr.x, tol);
    } catch (const std::exception& e) {
      corrector_failed = true;
      trace.note = std::string("record verification failed at t = ") +
                   std::to_string(t) + ": " + e.what();
      break;
    }
    trace.records.push_back(std::move(rec));
  }

  // Numeric surrogate for the limiting product-active set: pairs in H at
  // every record in the tail t <= sqrt(t0).
  {
    const double threshold = std::sqrt(t0);
    std::vector<int> i0;
    bool any = false;
    for (int j = 0; j < prob.kappa; ++j) {
      bool in_all = true, seen = false;
      for (const TraceRecord& rec : trace.records) {
        if (rec.t > threshold) continue;
        seen = true;
        in_all = in_all && contains(rec.analysis.pattern.H, j);
      }
      any = any || seen;
      if (seen && in_all) i0.push_back(j);
    }
    trace.I0 = any ? i0 : std::vector<int>{};
  }

  if (corrector_failed) {
    trace.verdict = TraceVerdict::Diverged;
    return trace;
  }

  // Richardson extrapolation (order 1, two levels on the last 3 records),
  // then a projection onto the MPCC set before the limit analysis.
  const size_t nrec = trace.records.size();
  Eigen::VectorXd limit;
  if (nrec >= 3) {
    const Eigen::VectorXd& a = trace.records[nrec - 3].x;
    const Eigen::VectorXd& b = trace.records[nrec - 2].x;
    const Eigen::VectorXd& c = trace.records[nrec - 1].x;
    const Eigen::VectorXd y1 = (b - gamma * a) / (1.0 - gamma);
    const Eigen::VectorXd y2 = (c - gamma * b) / (1.0 - gamma);
    limit = (y2 - gamma * gamma * y1) / (1.0 - gamma * gamma);
  } else if (nrec == 2) {
    limit = (trace.records[1].x - gamma * trace.records[0].x) / (1.0 - gamma);
  } else {
    limit = trace.records.back().x;
  }

  double step_scale = trace.records.back().t;
  if (nrec >= 2)
    step_scale += (trace.records[nrec - 1].x - trace.records[nrec - 2].x)
                      .lpNorm<Eigen::Infinity>();
  const double snapTol = std::max(10.0 * tol.feas, 3.0 * step_scale);
  limit = snap_to_mpcc(prob, limit, snapTol);
  trace.limit_point = limit;

  try {
    trace.limit_analysis = mpcc_index_report(prob, limit, tol);
  } catch (const std::exception& e) {
    trace.verdict = TraceVerdict::Diverged;
    trace.note = std::string("limit analysis failed: ") + e.what();
    return trace;
  }

  if (trace.limit_analysis->report.ci)
    trace.shift = trace.records.back().analysis.report.qi -
                  *trace.limit_analysis->report.ci;

  bool any_degenerate_record = false;
  for (const TraceRecord& rec : trace.records)
    any_degenerate_record = any_degenerate_record || !rec.analysis.report.nondegenerate();
  if (any_degenerate_record)
    trace.verdict = TraceVerdict::BifurcationSuspected;
  else if (!trace.limit_analysis->report.nondegenerate())
    trace.verdict = TraceVerdict::ConvergedDegenerate;
  else
    trace.verdict = TraceVerdict::ConvergedNondegenerate;
  return trace;
}

LimitMultiplierEstimate limit_multipliers(const MpccProblem& prob,
                                          const PathTrace& trace,
                                          const Tolerances& tol) {
  if (!trace.limit_analysis || trace.records.empty())
    throw InputError("limit multipliers need a converged trace");
  const MpccPointAnalysis& lim = *trace.limit_analysis;

  auto estimate_from = [&](const TraceRecord& rec) {
    MpccMultipliers est;
    const Eigen::VectorXd& xt = rec.x;
    auto eta_of = [&](int j) {
      auto it = rec.analysis.mult.eta.find(j);
      return it == rec.analysis.mult.eta.end() ? 0.0 : it->second;
    };
    auto nu_of = [&](const std::map<int, double>& m, int j) {
      auto it = m.find(j);
      return it == m.end() ? 0.0 : it->second;
    };
    for (int j : lim.pattern.a01)
      est.sigma1[j] = contains(trace.I0, j)
                          ? -eta_of(j) * prob.F2[j].value(xt)
                          : nu_of(rec.analysis.mult.nu1, j);
    for (int j : lim.pattern.a10)
      est.sigma2[j] = contains(trace.I0, j)
                          ? -eta_of(j) * prob.F1[j].value(xt)
                          : nu_of(rec.analysis.mult.nu2, j);
    for (int j : lim.pattern.a00) {
      if (contains(trace.I0, j)) {
        est.rho1[j] = -eta_of(j) * prob.F2[j].value(xt);
        est.rho2[j] = -eta_of(j) * prob.F1[j].value(xt);
      } else {
        est.rho1[j] = nu_of(rec.analysis.mult.nu1, j);
        est.rho2[j] = nu_of(rec.analysis.mult.nu2, j);
      }
    }
    return est;
  };

  auto discrepancy_of = [&](const MpccMultipliers& est) {
    double d = 0.0;
    auto acc = [&](const std::map<int, double>& a, const std::map<int, double>& b) {
      for (const auto& [j, v] : a) {
        auto it = b.find(j);
        d = std::max(d, std::abs(v - (it == b.end() ? 0.0 : it->second)));
      }
    };
    acc(est.sigma1, lim.mult.sigma1);
    acc(est.sigma2, lim.mult.sigma2);
    acc(est.rho1, lim.mult.rho1);
    acc(est.rho2, lim.mult.rho2);
    return d;
  };

  LimitMultiplierEstimate out;
  out.estimate = estimate_from(trace.records.back());
  out.discrepancy = discrepancy_of(out.estimate);
  const size_t nrec = trace.records.size();
  for (size_t k = nrec >= 3 ? nrec - 3 : 0; k < nrec; ++k)
    out.tail_discrepancies.push_back(discrepancy_of(estimate_from(trace.records[k])));
  return out;
}

MultistartResult multistart_kkt(const MpccProblem& prob, const Regularization& reg,
                                const Eigen::VectorXd& center, double radius,
                                int count, std::uint64_t seed,
                                const Tolerances& tol) {
  prob.check_dimension(center);
  if (count < 1) throw InputError("multistart needs count >= 1");
  if (radius <= 0.0) throw InputError("multistart needs radius > 0");

  MultistartResult res;
  res.seed = seed;
  res.attempts = count;

  // Pre-generate the sample points so the run is reproducible regardless of
  // the per-sample work.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd dir(prob.n);
    for (int k = 0; k < prob.n; ++k) dir(k) = gauss(rng);
    const double norm = dir.norm();
    if (norm < 1e-300) {
      samples.push_back(center);
      continue;
    }
    const double r = radius * std::pow(unif(rng), 1.0 / prob.n);
    samples.push_back(center + (r / norm) * dir);
  }

  for (const Eigen::VectorXd& s : samples) {
    KktSeed kseed = seed_from_point(prob, reg, s, reg.t);
    NewtonResult nr = newton_kkt(prob, reg, kseed, tol);
    if (!nr.ok()) continue;
    if ((nr.x - center).norm() > radius) continue;
    ++res.converged;
    const double sepEff = tol.sep * (1.0 + center.lpNorm<Eigen::Infinity>());
    bool merged = false;
    for (auto& c : res.clusters) {
      if ((nr.x - c.x).lpNorm<Eigen::Infinity>() <= sepEff) {
        ++c.hits;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    MultistartResult::Cluster c;
    c.x = nr.x;
    c.hits = 1;
    c.objective = prob.f.value(nr.x);
    try {
      c.analysis = kkt_index_report(prob, reg, nr.x, tol);
    } catch (const std::exception&) {
      continue;  // verification failed; not a usable solution
    }
    res.clusters.push_back(std::move(c));
  }

  if (res.clusters.size() >= 10) {
    double fmin = res.clusters.front().objective, fmax = fmin;
    bool any_degenerate = false;
    for (const auto& c : res.clusters) {
      fmin = std::min(fmin, c.objective);
      fmax = std::max(fmax, c.objective);
      any_degenerate = any_degenerate || !c.analysis.report.nondegenerate();
    }
    res.continuum_flag =
        (fmax - fmin) < 1e-8 * (1.0 + std::abs(fmin)) && any_degenerate;
  }
  return res;
}

WellposednessReport wellposedness_check(const MpccProblem& prob, RegKind kind,
                                        const Eigen::VectorXd& xbar,
                                        const std::vector<double>& tList,
                                        const Tolerances& tol, int msCount,
                                        double msRadius, std::uint64_t msSeed) {
  MpccPointAnalysis base = mpcc_index_report(prob, xbar, tol);
  const auto& ndc = *base.report.ndc;
  static const char* names[4] = {"NDC1", "NDC2", "NDC3", "NDC4"};
  const int required = kind == RegKind::ScholtesInequality ? 4 : 3;
  for (int i = 0; i < required; ++i)
    if (!ndc[i])
      throw PreconditionError(names[i], std::string(names[i]) +
                                            " fails at the given point");

  WellposednessReport rep;
  rep.ci = *base.report.ci;
  for (double t : tList) {
    WellposednessReport::PerT r;
    r.t = t;
    Regularization reg(kind, t);
    KktSeed seed = seed_from_cstationary(prob, reg, xbar, base.mult, base.signs, t);
    NewtonResult nr = newton_kkt(prob, reg, seed, tol);
    r.newton_converged = nr.ok();
    r.newton_iterations = nr.iterations;
    if (nr.ok()) {
      r.x = nr.x;
      try {
        KktPointAnalysis ka = kkt_index_report(prob, reg, nr.x, tol);
        r.nd_ok = ka.report.nondegenerate();
        r.qi = ka.report.qi;
        r.index_match = ka.report.qi == rep.ci;
      } catch (const std::exception& e) {
        r.note = e.what();
      }
      MultistartResult ms =
          multistart_kkt(prob, reg, xbar, msRadius, msCount, msSeed, tol);
      r.clusters = static_cast<int>(ms.clusters.size());
      r.unique = ms.clusters.size() == 1;
    } else {
      r.note = to_string(nr.status);
    }
    r.pass = r.newton_converged && r.nd_ok && r.index_match && r.unique;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

}  // namespace mpcc
