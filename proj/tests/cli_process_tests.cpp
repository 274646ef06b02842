// End-to-end tests that drive the installed binary: exit codes, byte-stable
// output, format switches, the REPORT_PRECISION override.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = TPMWORK_CLI_PATH;
const std::string kFixtureDir = TPMWORK_FIXTURE_DIR;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = "/tmp/tpmwork_test_stdout.txt";
  const std::string err_path = "/tmp/tpmwork_test_stderr.txt";
  const std::string command =
      env_prefix + kCli + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::string write_temp_scenario(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("verify on the Hadamard fixture: exit 0 and passing identity flags") {
  const RunResult r = run_cli("verify " + kFixtureDir + "/hadamard-qubit.json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(r.out);
  CHECK(std::abs(report.at("eq1").at("full_grid").get<double>() - 1.0) <= 1e-12);
  CHECK(report.at("eq1").at("pass").get<bool>());
  CHECK(report.at("jarzynski").at("pass").get<bool>());
  CHECK(report.at("thermal_chain").at("pass").get<bool>());
  CHECK(report.at("tool").at("name").get<std::string>() == "tpmwork");
}

TEST_CASE("verify exits 2 when the evolution matrix is not unitary") {
  const std::string path = write_temp_scenario("nonunitary.json", R"({
    "dim": 2, "beta": 1.0,
    "h_initial": {"eigenvalues": [0.0, 1.0]},
    "evolution": {"matrix": [[[1,0],[0,0]],[[0,0],[2,0]]]},
    "h_final": "same-as-initial"
  })");
  const RunResult r = run_cli("verify " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("unitary") != std::string::npos);
}

TEST_CASE("verify exits 1 when beta is missing and names the field") {
  const std::string path = write_temp_scenario("nobeta.json", R"({
    "dim": 2,
    "h_initial": {"eigenvalues": [0.0, 1.0]},
    "evolution": "identity",
    "h_final": "same-as-initial"
  })");
  const RunResult r = run_cli("verify " + path);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("beta") != std::string::npos);
}

TEST_CASE("sample output is byte-identical for a fixed seed") {
  const std::string args = "sample " + kFixtureDir +
                           "/hadamard-qubit.json --shots 20000 --seed 77 "
                           "--observable exp_jarzynski";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("sample on the identity scenario with exp_neg_i_tilde stays on support") {
  const RunResult r = run_cli("sample " + kFixtureDir +
                              "/identity-qubit.json --shots 5000 --seed 3 "
                              "--observable exp_neg_i_tilde");
  CHECK(r.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(r.out);
  const auto est = report.at("estimates")[0];
  CHECK(est.at("observable").get<std::string>() == "exp_neg_i_tilde");
  CHECK(est.at("shots").get<std::size_t>() == 5000);
}

TEST_CASE("sample csv format carries the documented header") {
  const RunResult r = run_cli("sample " + kFixtureDir +
                              "/hadamard-qubit.json --shots 100 --seed 1 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("observable,shots,seed,mean,sample_std,standard_error,exact,z_score\n", 0) ==
        0);
}

TEST_CASE("search reports are deterministic for a fixed seed") {
  const std::string args = "search " + kFixtureDir +
                           "/identity-qubit.json --starts 4 --max-iter 150 --seed 5";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const nlohmann::json report = nlohmann::json::parse(a.out);
  CHECK(report.at("search").at("objective").get<double>() > 0.0);
  CHECK(report.at("search").at("starts").get<int>() == 4);
}

TEST_CASE("search validates its budget flags") {
  CHECK(run_cli("search " + kFixtureDir + "/identity-qubit.json --starts 0").exit_code == 1);
  CHECK(run_cli("search " + kFixtureDir + "/identity-qubit.json --max-iter 50").exit_code == 1);
}

TEST_CASE("sweep emits one CSV row per grid point") {
  const RunResult r = run_cli("sweep " + kFixtureDir +
                              "/hadamard-qubit.json --param beta --from 0.1 --to 2.0 --steps 5");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "beta,eq1_full_grid,eq1_support_restricted,jarzynski,max_abs_residual");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    const auto comma = line.find(',');
    const double full_grid = std::stod(line.substr(comma + 1));
    CHECK(std::abs(full_grid - 1.0) <= 1e-10);
  }
  CHECK(rows == 5);
}

TEST_CASE("sweep rejects a single-step grid") {
  const RunResult r = run_cli("sweep " + kFixtureDir +
                              "/hadamard-qubit.json --param beta --from 0.1 --to 2.0 --steps 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("steps") != std::string::npos);
}

TEST_CASE("REPORT_PRECISION trims the emitted digits and rejects junk") {
  const std::string args = "verify " + kFixtureDir + "/hadamard-qubit.json";
  const RunResult full = run_cli(args);
  const RunResult coarse = run_cli(args, "REPORT_PRECISION=6 ");
  REQUIRE(full.exit_code == 0);
  REQUIRE(coarse.exit_code == 0);
  CHECK(full.out != coarse.out);
  CHECK(coarse.out.find("0.731059") != std::string::npos);
  CHECK(run_cli(args, "REPORT_PRECISION=42 ").exit_code == 1);
}

TEST_CASE("verify report round-trips byte-for-byte through the scenario echo") {
  const RunResult first = run_cli("verify " + kFixtureDir + "/haar-qutrit.json");
  REQUIRE(first.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(first.out);
  const std::string echo_path = write_temp_scenario("echo.json", report.at("scenario").dump());
  const RunResult second = run_cli("verify " + echo_path);
  REQUIRE(second.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const std::string out_file = "/tmp/tpmwork_outfile.json";
  std::remove(out_file.c_str());
  const RunResult direct = run_cli("verify " + kFixtureDir + "/identity-qubit.json");
  const RunResult filed =
      run_cli("verify " + kFixtureDir + "/identity-qubit.json --out " + out_file);
  REQUIRE(direct.exit_code == 0);
  REQUIRE(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_file) == direct.out);
}

TEST_CASE("unknown flags and missing subcommands exit 1") {
  CHECK(run_cli("verify " + kFixtureDir + "/identity-qubit.json --bogus").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
}
