#include "mpcc/report.hpp"

#include <fstream>

namespace mpcc {

namespace {

nlohmann::json one_based(const std::vector<int>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int j : v) arr.push_back(j + 1);
  return arr;
}

nlohmann::json one_based(const std::map<int, double>& m) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [j, v] : m) obj[std::to_string(j + 1)] = v;
  return obj;
}

}  // namespace

nlohmann::json to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

nlohmann::json to_json(const ActivePattern& p) {
  nlohmann::json j;
  if (p.side == Side::Mpcc) {
    j["a01"] = one_based(p.a01);
    j["a10"] = one_based(p.a10);
    j["a00"] = one_based(p.a00);
  } else {
    j["H"] = one_based(p.H);
    j["N1"] = one_based(p.N1);
    j["N2"] = one_based(p.N2);
  }
  return j;
}

nlohmann::json to_json(const SignPartition& s) {
  nlohmann::json j;
  j["a01Minus"] = one_based(s.a01_minus);
  j["a01Zero"] = one_based(s.a01_zero);
  j["a01Plus"] = one_based(s.a01_plus);
  j["a10Minus"] = one_based(s.a10_minus);
  j["a10Zero"] = one_based(s.a10_zero);
  j["a10Plus"] = one_based(s.a10_plus);
  j["a00Minus"] = one_based(s.a00_minus);
  j["a00Zero"] = one_based(s.a00_zero);
  j["a00Plus"] = one_based(s.a00_plus);
  return j;
}

nlohmann::json to_json(const MpccMultipliers& m) {
  nlohmann::json j;
  j["sigma1"] = one_based(m.sigma1);
  j["sigma2"] = one_based(m.sigma2);
  j["rho1"] = one_based(m.rho1);
  j["rho2"] = one_based(m.rho2);
  j["residual"] = m.residual;
  j["wStationary"] = m.w_stationary;
  j["certifiedUnique"] = m.certified_unique;
  return j;
}

nlohmann::json to_json(const KktMultipliers& m) {
  nlohmann::json j;
  j["eta"] = one_based(m.eta);
  j["nu1"] = one_based(m.nu1);
  j["nu2"] = one_based(m.nu2);
  j["residual"] = m.residual;
  j["kkt"] = m.kkt;
  return j;
}

nlohmann::json to_json(const IndexReport& r) {
  nlohmann::json j;
  j["qi"] = r.qi;
  j["zeroEigs"] = r.zero_eigs;
  j["tangentDim"] = r.tangent_dim;
  if (r.ndc) {
    j["bi"] = r.bi;
    j["ci"] = r.ci ? nlohmann::json(*r.ci) : nlohmann::json(nullptr);
    j["ndc"] = *r.ndc;
  }
  if (r.nd) j["nd"] = *r.nd;
  return j;
}

nlohmann::json to_json(const LicqResult& r) {
  nlohmann::json j;
  j["holds"] = r.holds;
  j["rows"] = r.rows;
  j["rank"] = r.rank;
  nlohmann::json sv = nlohmann::json::array();
  for (int i = 0; i < r.singular_values.size(); ++i)
    sv.push_back(r.singular_values(i));
  j["singularValues"] = sv;
  return j;
}

nlohmann::json to_json(const Tolerances& t) {
  nlohmann::json j;
  j["feas"] = t.feas;
  j["stat"] = t.stat;
  j["rank"] = t.rank;
  j["eig"] = t.eig;
  j["zero"] = t.zero;
  j["newton"] = t.newton;
  j["sep"] = t.sep;
  return j;
}

nlohmann::json to_json(const MpccPointAnalysis& a) {
  nlohmann::json j;
  j["side"] = "mpcc";
  j["pattern"] = to_json(a.pattern);
  j["multipliers"] = to_json(a.mult);
  j["signPartition"] = to_json(a.signs);
  j["class"] = to_string(a.cls);
  j["licq"] = to_json(a.licq);
  j["index"] = to_json(a.report);
  return j;
}

nlohmann::json to_json(const KktPointAnalysis& a) {
  nlohmann::json j;
  j["side"] = "regularized";
  j["pattern"] = to_json(a.pattern);
  j["multipliers"] = to_json(a.mult);
  j["licq"] = to_json(a.licq);
  j["index"] = to_json(a.report);
  return j;
}

nlohmann::json to_json(const PathTrace& t) {
  nlohmann::json j;
  j["variant"] = variant_name(t.kind);
  j["t0"] = t.t0;
  j["gamma"] = t.gamma;
  j["tmin"] = t.tmin;
  nlohmann::json recs = nlohmann::json::array();
  for (const TraceRecord& r : t.records) {
    nlohmann::json rec;
    rec["t"] = r.t;
    rec["x"] = to_json(r.x);
    rec["pattern"] = to_json(r.analysis.pattern);
    rec["multipliers"] = to_json(r.analysis.mult);
    rec["index"] = to_json(r.analysis.report);
    recs.push_back(std::move(rec));
  }
  j["records"] = recs;
  j["I0"] = one_based(t.I0);
  j["limitPoint"] =
      t.limit_point ? to_json(*t.limit_point) : nlohmann::json(nullptr);
  j["limitAnalysis"] =
      t.limit_analysis ? to_json(*t.limit_analysis) : nlohmann::json(nullptr);
  j["shift"] = t.shift ? nlohmann::json(*t.shift) : nlohmann::json(nullptr);
  j["verdict"] = to_string(t.verdict);
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

nlohmann::json to_json(const LimitMultiplierEstimate& e) {
  nlohmann::json j;
  j["estimate"] = to_json(e.estimate);
  j["discrepancy"] = e.discrepancy;
  j["tailDiscrepancies"] = e.tail_discrepancies;
  return j;
}

nlohmann::json to_json(const MultistartResult& m) {
  nlohmann::json j;
  j["seed"] = m.seed;
  j["attempts"] = m.attempts;
  j["converged"] = m.converged;
  j["continuumFlag"] = m.continuum_flag;
  nlohmann::json cl = nlohmann::json::array();
  for (const auto& c : m.clusters) {
    nlohmann::json cj;
    cj["x"] = to_json(c.x);
    cj["hits"] = c.hits;
    cj["objective"] = c.objective;
    cj["pattern"] = to_json(c.analysis.pattern);
    cj["multipliers"] = to_json(c.analysis.mult);
    cj["index"] = to_json(c.analysis.report);
    cl.push_back(std::move(cj));
  }
  j["clusters"] = cl;
  return j;
}

nlohmann::json to_json(const WellposednessReport& w) {
  nlohmann::json j;
  j["ci"] = w.ci;
  j["allPass"] = w.all_pass();
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : w.results) {
    nlohmann::json rj;
    rj["t"] = r.t;
    rj["pass"] = r.pass;
    rj["newtonConverged"] = r.newton_converged;
    rj["newtonIterations"] = r.newton_iterations;
    rj["ndOk"] = r.nd_ok;
    rj["qi"] = r.qi;
    rj["indexMatch"] = r.index_match;
    rj["clusters"] = r.clusters;
    rj["unique"] = r.unique;
    rj["x"] = to_json(r.x);
    if (!r.note.empty()) rj["note"] = r.note;
    rs.push_back(std::move(rj));
  }
  j["results"] = rs;
  return j;
}

nlohmann::json to_json(const VerifyLedger& l) {
  nlohmann::json j;
  j["allPass"] = l.all_pass();
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : l.entries) {
    nlohmann::json ej;
    ej["case"] = e.case_name;
    ej["label"] = e.label;
    ej["field"] = e.field;
    ej["t"] = e.t;
    ej["pass"] = e.pass;
    if (!e.detail.empty()) ej["detail"] = e.detail;
    es.push_back(std::move(ej));
  }
  j["entries"] = es;
  return j;
}

const char* variant_name(RegKind k) {
  return k == RegKind::ScholtesInequality ? "scholtes" : "equality";
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "fnv1a:unavailable";
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json make_report(const std::string& command,
                           const std::vector<std::string>& argv,
                           const nlohmann::json& problem_info,
                           const Tolerances& tol, nlohmann::json results,
                           double elapsed_ms) {
  nlohmann::json j;
  j["schemaVersion"] = "1";
  j["command"] = command;
  j["argv"] = argv;
  j["problem"] = problem_info;
  j["tolerances"] = to_json(tol);
  j["results"] = std::move(results);
  j["timings"] = {{"totalMs", elapsed_ms}};
  return j;
}

}  // namespace mpcc
