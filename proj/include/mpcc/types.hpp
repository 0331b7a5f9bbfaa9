// Shared value types for the MPCC analysis library: tolerances, active
// patterns, multiplier sets, stationarity classes, and index reports.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpcc {

// One tolerance bundle is threaded through all analysis entry points.
// Comparisons are scale-relative: a threshold tol applied to a quantity v
// is usually tested as |v| <= tol * (1 + scale(v)).
struct Tolerances {
  double feas = 1e-8;    // feasibility / active-set detection
  double stat = 1e-8;    // stationarity residual
  double rank = 1e-10;   // singular-value ratio for rank decisions
  double eig = 1e-9;     // relative eigenvalue zero classification
  double zero = 1e-8;    // multiplier sign boundary
  double newton = 1e-10; // corrector residual
  double sep = 1e-6;     // multistart cluster separation
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasiblePointError : std::runtime_error {
  explicit InfeasiblePointError(const std::string& msg,
                                std::vector<std::string> violated = {})
      : std::runtime_error(msg), violations(std::move(violated)) {}
  std::vector<std::string> violations;
};

struct NotStationaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a check requires a nondegeneracy flag that does not hold;
// carries the name of the failed flag ("NDC4", ...).
struct PreconditionError : std::runtime_error {
  PreconditionError(const std::string& flag, const std::string& msg)
      : std::runtime_error(msg), failed_flag(flag) {}
  std::string failed_flag;
};

enum class Side { Mpcc, Regularized };

// Active index sets at a point, 0-based internally.  On the MPCC side the
// sets a01/a10/a00 are used; on the regularized side H/N1/N2.  Sets are
// kept sorted.
struct ActivePattern {
  Side side = Side::Mpcc;
  std::vector<int> a01, a10, a00;
  std::vector<int> H, N1, N2;

  bool operator==(const ActivePattern& o) const {
    return side == o.side && a01 == o.a01 && a10 == o.a10 && a00 == o.a00 &&
           H == o.H && N1 == o.N1 && N2 == o.N2;
  }
};

// Sign-based refinement of the active sets of a W-stationary point.
// Each triple (minus/zero/plus) partitions the corresponding active set.
struct SignPartition {
  std::vector<int> a01_minus, a01_zero, a01_plus;
  std::vector<int> a10_minus, a10_zero, a10_plus;
  std::vector<int> a00_minus, a00_zero, a00_plus;
};

// Multipliers of the MPCC stationarity equation, keyed by constraint index.
// sigma1 on a01, sigma2 on a10, rho1/rho2 on a00.
struct MpccMultipliers {
  std::map<int, double> sigma1, sigma2, rho1, rho2;
  double residual = 0.0;
  bool w_stationary = false;
  // False when the active gradients are rank deficient; the minimum-norm
  // solution is still reported but is not certified unique.
  bool certified_unique = false;

  double max_abs() const {
    double m = 0.0;
    for (const auto* s : {&sigma1, &sigma2, &rho1, &rho2})
      for (const auto& [j, v] : *s) m = std::max(m, std::abs(v));
    return m;
  }
};

// Multipliers of the regularized KKT system: eta on H, nu1 on N1, nu2 on N2.
struct KktMultipliers {
  std::map<int, double> eta, nu1, nu2;
  double residual = 0.0;
  bool kkt = false;

  double max_abs() const {
    double m = 0.0;
    for (const auto* s : {&eta, &nu1, &nu2})
      for (const auto& [j, v] : *s) m = std::max(m, std::abs(v));
    return m;
  }
};

// Nested stationarity classes; S implies M implies C implies W.
enum class StationarityClass { NotStationary, W, C, M, S };

struct Inertia {
  int neg = 0, zero = 0, pos = 0;
};

// Index data of a stationary point.  On the MPCC side ndc holds the four
// nondegeneracy flags and ci is set when NDC1-NDC3 hold; on the regularized
// side nd holds ND1-ND3 and bi/ci stay unset.
struct IndexReport {
  int qi = 0;
  int bi = 0;
  std::optional<int> ci;
  int zero_eigs = 0;
  int tangent_dim = 0;
  std::optional<std::array<bool, 4>> ndc;
  std::optional<std::array<bool, 3>> nd;

  bool nondegenerate() const {
    if (ndc) return (*ndc)[0] && (*ndc)[1] && (*ndc)[2];
    if (nd) return (*nd)[0] && (*nd)[1] && (*nd)[2];
    return false;
  }
};

inline const char* to_string(StationarityClass c) {
  switch (c) {
    case StationarityClass::NotStationary: return "not-stationary";
    case StationarityClass::W: return "W";
    case StationarityClass::C: return "C";
    case StationarityClass::M: return "M";
    case StationarityClass::S: return "S";
  }
  return "?";
}

}  // namespace mpcc
