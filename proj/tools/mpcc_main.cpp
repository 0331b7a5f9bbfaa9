// Command-line front end: point analysis, path tracing, multistart search,
// and corpus verification, with a JSON report on stdout and a short summary
// on stderr.
//
// Exit codes: 0 success, 1 internal/numerical failure, 2 input error.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpcc/continuation.hpp"
#include "mpcc/corpus.hpp"
#include "mpcc/indices.hpp"
#include "mpcc/report.hpp"

namespace {

using nlohmann::json;

Eigen::VectorXd parse_point(const std::string& csv, const std::string& file) {
  std::vector<double> vals;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw mpcc::InputError("cannot open point file: " + file);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw mpcc::InputError(std::string("point file is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw mpcc::InputError("point file must hold a JSON array");
    vals = j.get<std::vector<double>>();
  } else {
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        vals.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw mpcc::InputError("cannot parse point coordinate: " + item);
      }
    }
  }
  if (vals.empty()) throw mpcc::InputError("empty point");
  Eigen::VectorXd x(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) x(i) = vals[i];
  return x;
}

mpcc::RegKind parse_variant(const std::string& v) {
  if (v == "scholtes") return mpcc::RegKind::ScholtesInequality;
  if (v == "equality") return mpcc::RegKind::EqualitySmoothing;
  throw mpcc::InputError("unknown variant: " + v + " (use scholtes or equality)");
}

json problem_info(const mpcc::MpccProblem& prob, const std::string& path) {
  json j;
  j["name"] = prob.name;
  j["file"] = path;
  j["hash"] = mpcc::file_hash(path);
  j["n"] = prob.n;
  j["kappa"] = prob.kappa;
  return j;
}

void emit(const json& report, const std::string& output) {
  std::cout << report.dump(2) << "\n";
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw mpcc::InputError("cannot write output file: " + output);
    out << report.dump(2) << "\n";
  }
}

struct CommonOpts {
  std::string problem_file;
  std::string output;
  mpcc::Tolerances tol;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_problem = true) {
  if (with_problem)
    cmd->add_option("problem", o.problem_file, "problem file (JSON)")->required();
  cmd->add_option("--output", o.output, "also write the report to this file");
  cmd->add_option("--tol-feas", o.tol.feas, "feasibility/active-set tolerance");
  cmd->add_option("--tol-stat", o.tol.stat, "stationarity residual tolerance");
  cmd->add_option("--tol-rank", o.tol.rank, "rank decision tolerance");
  cmd->add_option("--tol-eig", o.tol.eig, "eigenvalue zero tolerance");
  cmd->add_option("--tol-zero", o.tol.zero, "multiplier sign tolerance");
  cmd->add_option("--tol-newton", o.tol.newton, "corrector residual tolerance");
  cmd->add_option("--tol-sep", o.tol.sep, "multistart cluster separation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationarity, index, and continuation analysis for mathematical "
               "programs with complementarity constraints"};
  app.require_subcommand(1);
  std::vector<std::string> argv_echo(argv, argv + argc);

  // analyze
  CommonOpts an;
  std::string an_point, an_point_file, an_variant;
  double an_t = 0.0;
  auto* analyze = app.add_subcommand(
      "analyze", "classify a point: MPCC side, or regularized side with --variant");
  add_common(analyze, an);
  analyze->add_option("--point", an_point, "comma-separated coordinates");
  analyze->add_option("--point-file", an_point_file, "JSON array of coordinates");
  analyze->add_option("--variant", an_variant, "scholtes | equality");
  analyze->add_option("--t", an_t, "regularization parameter");

  // trace
  CommonOpts tr;
  std::string tr_start, tr_start_file, tr_variant = "scholtes";
  double tr_t0 = 0.5, tr_gamma = 0.5, tr_tmin = 1e-8;
  auto* trace = app.add_subcommand("trace", "trace KKT points as t decreases");
  add_common(trace, tr);
  trace->add_option("--start", tr_start, "start point (KKT at t0)");
  trace->add_option("--start-file", tr_start_file, "JSON array start point");
  trace->add_option("--t0", tr_t0, "initial parameter");
  trace->add_option("--gamma", tr_gamma, "schedule factor, 0 < gamma < 1");
  trace->add_option("--tmin", tr_tmin, "final parameter");
  trace->add_option("--variant", tr_variant, "scholtes | equality");

  // multistart
  CommonOpts ms;
  std::string ms_center, ms_center_file, ms_variant = "scholtes";
  double ms_t = 0.1, ms_radius = 0.5;
  int ms_count = 64;
  std::uint64_t ms_seed = 12345;
  auto* multistart =
      app.add_subcommand("multistart", "search for KKT points near a center");
  add_common(multistart, ms);
  multistart->add_option("--center", ms_center, "center point");
  multistart->add_option("--center-file", ms_center_file, "JSON array center");
  multistart->add_option("--t", ms_t, "regularization parameter");
  multistart->add_option("--radius", ms_radius, "search radius");
  multistart->add_option("--count", ms_count, "number of random seeds");
  multistart->add_option("--seed", ms_seed, "RNG seed");
  multistart->add_option("--variant", ms_variant, "scholtes | equality");

  // corpus-verify
  CommonOpts cv;
  std::string cv_data_dir;
  auto* corpus = app.add_subcommand(
      "corpus-verify", "check the bundled cases against their golden data");
  add_common(corpus, cv, false);
  corpus->add_option("--data-dir", cv_data_dir, "corpus data directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto t_begin = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t_begin] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t_begin)
        .count();
  };

  try {
    if (analyze->parsed()) {
      mpcc::MpccProblem prob = mpcc::MpccProblem::load_file(an.problem_file);
      Eigen::VectorXd x = parse_point(an_point, an_point_file);
      json results;
      if (an_variant.empty()) {
        mpcc::MpccPointAnalysis a = mpcc::mpcc_index_report(prob, x, an.tol);
        mpcc::MpccSecondOrder so = mpcc::second_order_conditions(prob, x, a, an.tol);
        results = mpcc::to_json(a);
        results["point"] = mpcc::to_json(x);
        results["secondOrder"] = {{"ssosc", mpcc::to_string(so.ssosc)},
                                  {"mpccSoc", mpcc::to_string(so.mpcc_soc)}};
        std::cerr << "class " << mpcc::to_string(a.cls) << ", qi " << a.report.qi
                  << ", bi " << a.report.bi << ", ci "
                  << (a.report.ci ? std::to_string(*a.report.ci) : "null") << "\n";
      } else {
        if (an_t <= 0.0) throw mpcc::InputError("--variant needs --t > 0");
        mpcc::Regularization reg(parse_variant(an_variant), an_t);
        mpcc::KktPointAnalysis a = mpcc::kkt_index_report(prob, reg, x, an.tol);
        mpcc::SocFlag so = mpcc::sonc(prob, reg, x, a, an.tol);
        results = mpcc::to_json(a);
        results["point"] = mpcc::to_json(x);
        results["t"] = an_t;
        results["variant"] = mpcc::variant_name(reg.kind);
        results["secondOrder"] = {{"sonc", mpcc::to_string(so)}};
        std::cerr << "KKT point, qi " << a.report.qi << ", nd ["
                  << (*a.report.nd)[0] << "," << (*a.report.nd)[1] << ","
                  << (*a.report.nd)[2] << "]\n";
      }
      emit(mpcc::make_report("analyze", argv_echo,
                             problem_info(prob, an.problem_file), an.tol,
                             std::move(results), elapsed_ms()),
           an.output);
      return 0;
    }

    if (trace->parsed()) {
      mpcc::MpccProblem prob = mpcc::MpccProblem::load_file(tr.problem_file);
      Eigen::VectorXd x = parse_point(tr_start, tr_start_file);
      mpcc::PathTrace pt = mpcc::trace_path(prob, parse_variant(tr_variant), x,
                                            tr_t0, tr_gamma, tr_tmin, tr.tol);
      json results = mpcc::to_json(pt);
      if (pt.limit_analysis) {
        mpcc::LimitMultiplierEstimate lm = mpcc::limit_multipliers(prob, pt, tr.tol);
        results["limitMultipliers"] = mpcc::to_json(lm);
      }
      std::cerr << "verdict " << mpcc::to_string(pt.verdict) << ", records "
                << pt.records.size() << ", shift "
                << (pt.shift ? std::to_string(*pt.shift) : "null") << "\n";
      emit(mpcc::make_report("trace", argv_echo,
                             problem_info(prob, tr.problem_file), tr.tol,
                             std::move(results), elapsed_ms()),
           tr.output);
      return 0;
    }

    if (multistart->parsed()) {
      mpcc::MpccProblem prob = mpcc::MpccProblem::load_file(ms.problem_file);
      Eigen::VectorXd center = parse_point(ms_center, ms_center_file);
      mpcc::Regularization reg(parse_variant(ms_variant), ms_t);
      mpcc::MultistartResult res = mpcc::multistart_kkt(
          prob, reg, center, ms_radius, ms_count, ms_seed, ms.tol);
      json results = mpcc::to_json(res);
      results["t"] = ms_t;
      results["variant"] = mpcc::variant_name(reg.kind);
      std::cerr << res.clusters.size() << " cluster(s), continuum flag "
                << (res.continuum_flag ? "true" : "false") << "\n";
      emit(mpcc::make_report("multistart", argv_echo,
                             problem_info(prob, ms.problem_file), ms.tol,
                             std::move(results), elapsed_ms()),
           ms.output);
      return 0;
    }

    if (corpus->parsed()) {
      mpcc::VerifyLedger ledger = mpcc::corpus_verify_all(cv.tol, 1e-8, cv_data_dir);
      json results = mpcc::to_json(ledger);
      int failed = 0;
      for (const auto& e : ledger.entries)
        if (!e.pass) {
          ++failed;
          std::cerr << "FAIL " << e.case_name << "/" << e.label << " t=" << e.t
                    << " " << e.field << ": " << e.detail << "\n";
        }
      std::cerr << ledger.entries.size() << " checks, " << failed << " failed\n";
      json info;
      info["name"] = "corpus";
      info["dataDir"] = mpcc::corpus_data_dir(cv_data_dir);
      emit(mpcc::make_report("corpus-verify", argv_echo, info, cv.tol,
                             std::move(results), elapsed_ms()),
           cv.output);
      return ledger.all_pass() ? 0 : 1;
    }
  } catch (const mpcc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const mpcc::InfeasiblePointError& e) {
    std::cerr << "infeasible point: " << e.what() << "\n";
    for (const auto& v : e.violations) std::cerr << "  " << v << "\n";
    return 2;
  } catch (const mpcc::NotStationaryError& e) {
    std::cerr << "not stationary: " << e.what() << "\n";
    return 2;
  } catch (const mpcc::PreconditionError& e) {
    std::cerr << "precondition failed (" << e.failed_flag << "): " << e.what()
              << "\n";
    return 2;
  } catch (const mpcc::SeedError& e) {
    std::cerr << "seed error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
