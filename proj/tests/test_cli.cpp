// End-to-end checks of the command-line tool: exit codes, report shape, and
// byte-stability of reports.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef MPCC_CLI_PATH
#define MPCC_CLI_PATH "mpcc"
#endif
#ifndef MPCC_SOURCE_DATA_DIR
#define MPCC_SOURCE_DATA_DIR "data"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string out_file = std::string(std::tmpnam(nullptr)) + ".json";
  const std::string cmd = std::string(MPCC_CLI_PATH) + " " + args + " > " +
                          out_file + " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(out_file.c_str());
  return r;
}

std::string problem(const std::string& name) {
  return std::string(MPCC_SOURCE_DATA_DIR) + "/problems/" + name + ".json";
}

nlohmann::json strip_timings(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("timings");
  return j;
}

}  // namespace

TEST_CASE("analyze: MPCC side") {
  RunResult r = run_cli("analyze " + problem("ndc4") + " --point 0,0,1");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["schemaVersion"] == "1");
  CHECK(j["results"]["class"] == "S");
  CHECK(j["results"]["index"]["ndc"] ==
        nlohmann::json::parse("[true,true,true,false]"));
  CHECK(j["results"]["index"]["ci"] == 0);
}

TEST_CASE("analyze: regularized side") {
  RunResult r = run_cli("analyze " + problem("ndc4") +
                        " --point 0.25,0.25,1 --variant scholtes --t 0.5");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["index"]["nd"] == nlohmann::json::parse("[true,true,true]"));
  CHECK(j["results"]["index"]["qi"] == 1);
}

TEST_CASE("analyze: dimension mismatch exits 2") {
  RunResult r = run_cli("analyze " + problem("ndc4") + " --point 0,1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("analyze: infeasible point exits 2") {
  RunResult r = run_cli("analyze " + problem("ndc4") + " --point 1,1,1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("trace: shift and verdict on the saddle path") {
  RunResult r = run_cli("trace " + problem("ndc4") +
                        " --start 0.25,0.25,1 --t0 0.5 --tmin 1e-6");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["shift"] == 1);
  CHECK(j["results"]["verdict"] == "converged-nondegenerate");
}

TEST_CASE("trace: degenerate limit verdict") {
  RunResult r = run_cli("trace " + problem("ndc2fail") +
                        " --start 0.5,0.5 --t0 0.25 --tmin 1e-6");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["verdict"] == "converged-degenerate");
}

TEST_CASE("trace: gamma = 1 is a parameter error") {
  RunResult r = run_cli("trace " + problem("ndc4") +
                        " --start 0.25,0.25,1 --t0 0.5 --gamma 1.0");
  CHECK(r.exit_code == 2);
}

TEST_CASE("trace: non-KKT start exits 2") {
  RunResult r =
      run_cli("trace " + problem("ndc4") + " --start 0.1,0.2,1.05 --t0 0.5");
  CHECK(r.exit_code == 2);
}

TEST_CASE("multistart: two branches on the 2min problem") {
  RunResult r = run_cli("multistart " + problem("2min") +
                        " --center 0,0,1 --t 0.25 --radius 0.5 --count 64");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["clusters"].size() >= 2);
}

TEST_CASE("corpus-verify exits 0 on a clean build") {
  RunResult r = run_cli("corpus-verify");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["allPass"] == true);
}

TEST_CASE("corpus-verify exits nonzero on a corrupted golden file") {
  // Copy the data tree, bump one golden multiplier coefficient.
  const std::string dir = std::string(std::tmpnam(nullptr)) + "_data";
  REQUIRE(std::system(("cp -r " + std::string(MPCC_SOURCE_DATA_DIR) + " " + dir)
                          .c_str()) == 0);
  const std::string golden = dir + "/golden/ndc4.json";
  {
    std::ifstream in(golden);
    nlohmann::json j;
    in >> j;
    j["points"][0]["sigma1"]["2"] = -1.001;
    std::ofstream out(golden);
    out << j.dump(2);
  }
  RunResult r = run_cli("corpus-verify --data-dir " + dir);
  CHECK(r.exit_code != 0);
  std::system(("rm -rf " + dir).c_str());
}

TEST_CASE("identical invocations produce byte-identical reports sans timings") {
  const std::string args = "multistart " + problem("2min") +
                           " --center 0,0,1 --t 0.25 --radius 0.5 --count 32 "
                           "--seed 42";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(strip_timings(a.out).dump() == strip_timings(b.out).dump());
}

TEST_CASE("point files are accepted") {
  const std::string pf = std::string(std::tmpnam(nullptr)) + ".json";
  {
    std::ofstream out(pf);
    out << "[0,0,1]";
  }
  RunResult r = run_cli("analyze " + problem("ndc4") + " --point-file " + pf);
  CHECK(r.exit_code == 0);
  std::remove(pf.c_str());
}
