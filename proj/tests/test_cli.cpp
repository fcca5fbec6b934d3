#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  return std::string(SDNOPT_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI, capturing stdout; stderr goes to /dev/null.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SDNOPT_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/sdnopt_cli_test_") + name;
}

}  // namespace

TEST_CASE("solve-traffic on the triangle fixture reports 3 W and 25% savings") {
  RunResult r = run_cli("solve-traffic --instance " + fixture("triangle_one_flow.sdn") +
                        " --mode per-flow-link --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["objective"] == 3.0);
  CHECK(rep["baseline"] == 4.0);
  CHECK(rep["savings_fraction"] == 0.25);
  CHECK(rep["optimality"] == "exact");
  CHECK(rep["solution"]["routes"]["0"] == json::array({0, 1}));
  CHECK(!rep.contains("wall_ms"));
}

TEST_CASE("deterministic reports are byte-identical across runs") {
  const std::string args = "solve-traffic --instance " + fixture("triangle_two_flow.sdn") +
                           " --mode per-active-link --deterministic";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("every solve report re-verifies cleanly") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"solve-traffic", "triangle_two_flow.sdn"},
      {"solve-rules", "triangle_two_flow.sdn"},
      {"solve-placement", "placement_small.sdn"},
  };
  for (const auto& [cmd, file] : cases) {
    RunResult r = run_cli(cmd + " --instance " + fixture(file) + " --deterministic");
    REQUIRE(r.exit_code == 0);
    const std::string path = temp_path("report.json");
    std::ofstream(path) << r.out;
    RunResult v = run_cli("verify --instance " + fixture(file) + " --solution " + path);
    CHECK(v.exit_code == 0);
    json rep = json::parse(v.out);
    CHECK(rep["ok"] == true);
    CHECK(rep["violations"].empty());
  }
}

TEST_CASE("verify flags a tampered solution with an Eq. 5 violation") {
  RunResult r = run_cli("solve-traffic --instance " + fixture("triangle_one_flow.sdn") +
                        " --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  rep["solution"]["switch_on"][1] = 0;  // force the destination switch off
  const std::string path = temp_path("tampered.json");
  std::ofstream(path) << rep.dump();
  RunResult v = run_cli("verify --instance " + fixture("triangle_one_flow.sdn") +
                        " --solution " + path);
  CHECK(v.exit_code == 1);
  json out = json::parse(v.out);
  REQUIRE(!out["violations"].empty());
  CHECK(out["violations"][0]["equation"] == 5);
}

TEST_CASE("verify reports a violation for a route through non-adjacent switches") {
  RunResult r = run_cli("solve-traffic --instance " + fixture("diamond_rules.sdn") +
                        " --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  rep["solution"]["routes"]["0"] = json::array({0, 2});  // 0 and 2 share no edge
  const std::string path = temp_path("badroute.json");
  std::ofstream(path) << rep.dump();
  RunResult v = run_cli("verify --instance " + fixture("diamond_rules.sdn") +
                        " --solution " + path);
  CHECK(v.exit_code == 1);
  json out = json::parse(v.out);
  CHECK(out["ok"] == false);
  REQUIRE(!out["violations"].empty());
  CHECK(out["violations"][0]["detail"].get<std::string>().find("non-adjacent") !=
        std::string::npos);
}

TEST_CASE("compare on a single-flow instance shows zero gaps") {
  RunResult r = run_cli("compare --instance " + fixture("triangle_one_flow.sdn") +
                        " --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  REQUIRE(!rep["rows"].empty());
  for (const auto& row : rep["rows"]) {
    REQUIRE(row.contains("gap_vs_exact"));
    CHECK(row["gap_vs_exact"].get<double>() == doctest::Approx(0.0));
  }
}

TEST_CASE("infeasible instances exit 1 with a certificate") {
  RunResult r = run_cli("solve-traffic --instance " + fixture("triangle_infeasible.sdn") +
                        " --deterministic");
  CHECK(r.exit_code == 1);
  json rep = json::parse(r.out);
  CHECK(rep.contains("infeasible"));
  CHECK(rep["infeasible"]["blocked_flows"] == json::array({0}));
}

TEST_CASE("malformed input exits 2") {
  const std::string path = temp_path("truncated.sdn");
  std::ofstream(path) << "sdnopt-instance 1\nSWITCHES 2\n0 1 10 -1 -1\n";
  RunResult r = run_cli("solve-traffic --instance " + path);
  CHECK(r.exit_code == 2);
  RunResult missing = run_cli("solve-traffic --instance /tmp/does_not_exist.sdn");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("an exhausted budget exits 3 but still reports the incumbent") {
  RunResult r = run_cli("solve-traffic --instance " + fixture("triangle_two_flow.sdn") +
                        " --budget-nodes 1 --deterministic");
  CHECK(r.exit_code == 3);
  json rep = json::parse(r.out);
  CHECK(rep["optimality"] == "heuristic:incumbent");
  CHECK(rep.contains("objective"));
}

TEST_CASE("solve-placement reports the lexicographic optimum") {
  RunResult r = run_cli("solve-placement --instance " + fixture("placement_small.sdn") +
                        " --objective lex --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["objective"]["active_pms"] == 1);
  CHECK(rep["objective"]["network_cost"] == 0.0);
}

TEST_CASE("solve-rules on the G=1 diamond exits 0 with 7 rules") {
  RunResult r = run_cli("solve-rules --instance " + fixture("diamond_rules.sdn") +
                        " --deterministic");
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["objective"]["total_rules"] == 7);
  CHECK(rep["optimality"] == "exact");
}

TEST_CASE("gen is byte-deterministic and its output round-trips") {
  const std::string a = temp_path("gen_a.sdn");
  const std::string b = temp_path("gen_b.sdn");
  const std::string args =
      "gen --kind fattree --size 4 --flows 8 --rate-fraction 0.05 --locality cross-pod "
      "--seed 42 --out ";
  REQUIRE(run_cli(args + a).exit_code == 0);
  REQUIRE(run_cli(args + b).exit_code == 0);
  std::ifstream fa(a), fb(b);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
  RunResult solve = run_cli("solve-traffic --instance " + a +
                            " --solver greedy-binpack --deterministic");
  CHECK(solve.exit_code == 0);
}

TEST_CASE("gen imports SNDLib files with explicit power defaults") {
  const std::string out = temp_path("sndlib.sdn");
  RunResult no_watts = run_cli("gen --from-sndlib " + fixture("tiny_sndlib.txt") + " --out " + out);
  CHECK(no_watts.exit_code == 2);
  RunResult ok = run_cli("gen --from-sndlib " + fixture("tiny_sndlib.txt") +
                         " --switch-watts 5 --link-watts 2 --out " + out);
  REQUIRE(ok.exit_code == 0);
  RunResult solve = run_cli("solve-traffic --instance " + out + " --deterministic");
  CHECK(solve.exit_code == 0);
}

TEST_CASE("csv plot data is emitted for compare sweeps") {
  const std::string csv = temp_path("sweep.csv");
  RunResult r = run_cli("compare --instance " + fixture("triangle_two_flow.sdn") +
                        " --mode per-active-link --load-factors 0.5,1 --deterministic --csv " +
                        csv);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "load_factor,solver,savings_fraction");
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 12);  // 2 load factors x 6 traffic solvers (no fat-tree metadata)
}
