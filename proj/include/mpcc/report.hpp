// JSON serialization of analysis results.  Index sets and multiplier keys
// are emitted 1-based to match the usual constraint numbering; all floats
// keep full round-trip precision.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "mpcc/continuation.hpp"
#include "mpcc/corpus.hpp"
#include "mpcc/indices.hpp"
#include "mpcc/types.hpp"

namespace mpcc {

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const ActivePattern& p);
nlohmann::json to_json(const SignPartition& s);
nlohmann::json to_json(const MpccMultipliers& m);
nlohmann::json to_json(const KktMultipliers& m);
nlohmann::json to_json(const IndexReport& r);
nlohmann::json to_json(const LicqResult& r);
nlohmann::json to_json(const Tolerances& t);
nlohmann::json to_json(const MpccPointAnalysis& a);
nlohmann::json to_json(const KktPointAnalysis& a);
nlohmann::json to_json(const PathTrace& t);
nlohmann::json to_json(const LimitMultiplierEstimate& e);
nlohmann::json to_json(const MultistartResult& m);
nlohmann::json to_json(const WellposednessReport& w);
nlohmann::json to_json(const VerifyLedger& l);

const char* variant_name(RegKind k);

// FNV-1a over the raw file bytes, hex-encoded; identifies the problem file
// in reports.
std::string file_hash(const std::string& path);

// Report envelope: schemaVersion, command echo, problem identity, tolerances,
// results, and a timings block (the one part excluded from byte-stability).
nlohmann::json make_report(const std::string& command,
                           const std::vector<std::string>& argv,
                           const nlohmann::json& problem_info,
                           const Tolerances& tol, nlohmann::json results,
                           double elapsed_ms);

}  // namespace mpcc
