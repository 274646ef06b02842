#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tpmwork/commands.hpp"

using namespace tpmwork;
using cli::Scenario;

namespace {

const std::string kFixtureDir = TPMWORK_FIXTURE_DIR;

}  // namespace

TEST_CASE("fixtures parse and realize") {
  for (const char* name : {"identity-qubit.json", "hadamard-qubit.json", "haar-qutrit.json"}) {
    const Scenario s = cli::load_scenario(kFixtureDir + "/" + name);
    const cli::RealizedScenario rs = cli::realize(s);
    CHECK(rs.h_initial.dim() == s.dim);
    CHECK(rs.evolution.dim() == s.dim);
  }
}

TEST_CASE("parse errors name the offending field") {
  CHECK_THROWS_WITH_AS(cli::parse_scenario("{\"dim\": 2}"),
                       doctest::Contains("beta"), cli::ScenarioError);
  CHECK_THROWS_WITH_AS(cli::parse_scenario("not json"),
                       doctest::Contains("not valid JSON"), cli::ScenarioError);
  CHECK_THROWS_WITH_AS(
      cli::parse_scenario(
          R"({"dim": 2, "beta": -1, "h_initial": {"eigenvalues": [0,1]},
              "evolution": "identity", "h_final": "same-as-initial"})"),
      doctest::Contains("beta"), cli::ScenarioError);
  CHECK_THROWS_WITH_AS(
      cli::parse_scenario(
          R"({"dim": 3, "beta": 1, "h_initial": {"eigenvalues": [0,1,2]},
              "evolution": "hadamard", "h_final": "same-as-initial"})"),
      doctest::Contains("evolution"), cli::ScenarioError);
  CHECK_THROWS_WITH_AS(
      cli::parse_scenario(
          R"({"dim": 2, "beta": 1, "h_initial": {"eigenvalues": [0,1]},
              "evolution": "identity", "h_final": "same-as-initial",
              "conventions": {"work_sign": "sideways"}})"),
      doctest::Contains("work_sign"), cli::ScenarioError);
  CHECK_THROWS_WITH_AS(
      cli::parse_scenario(
          R"({"dim": 2, "beta": 1, "h_initial": {"eigenvalues": [0,1,2]},
              "evolution": "identity", "h_final": "same-as-initial"})"),
      doctest::Contains("h_initial"), cli::ScenarioError);
}

TEST_CASE("defaults: conventions paper/paper, thermalized false") {
  const Scenario s = cli::parse_scenario(
      R"({"dim": 2, "beta": 1, "h_initial": {"eigenvalues": [0,1]},
          "evolution": "identity", "h_final": "same-as-initial"})");
  CHECK(s.conventions.work_sign == tpm::WorkSign::paper);
  CHECK(s.conventions.delta_f == qstate::DeltaFConvention::paper);
  CHECK_FALSE(s.thermalized);
}

TEST_CASE("a non-unitary evolution matrix fails at realization, not parsing") {
  const Scenario s = cli::parse_scenario(
      R"({"dim": 2, "beta": 1, "h_initial": {"eigenvalues": [0,1]},
          "evolution": {"matrix": [[[1,0],[0,0]],[[0,0],[2,0]]]},
          "h_final": "same-as-initial"})");
  CHECK_THROWS_AS(cli::realize(s), tpm::NotUnitaryError);
}

TEST_CASE("compute_verify on the Hadamard fixture passes every identity flag") {
  const cli::RealizedScenario rs =
      cli::realize(cli::load_scenario(kFixtureDir + "/hadamard-qubit.json"));
  const cli::VerifyOutcome v = cli::compute_verify(rs);
  CHECK(v.eq1_pass);
  CHECK(v.jarzynski_pass);
  CHECK(v.chain_pass);
  CHECK(std::abs(v.averages.full_grid - 1.0) <= 1e-12);
  CHECK(v.jarzynski_expected == 1.0);
}

TEST_CASE("report precision honors REPORT_PRECISION within 6..17") {
  unsetenv("REPORT_PRECISION");
  CHECK(cli::report_precision() == 17);
  setenv("REPORT_PRECISION", "6", 1);
  CHECK(cli::report_precision() == 6);
  setenv("REPORT_PRECISION", "18", 1);
  CHECK_THROWS_AS(cli::report_precision(), std::runtime_error);
  setenv("REPORT_PRECISION", "abc", 1);
  CHECK_THROWS_AS(cli::report_precision(), std::runtime_error);
  unsetenv("REPORT_PRECISION");
}

TEST_CASE("format_double uses significant digits") {
  CHECK(cli::format_double(0.5, 17) == "0.5");
  CHECK(cli::format_double(1.0 / 3.0, 6) == "0.333333");
  CHECK(cli::format_double(0.7310585786300049, 17) == "0.73105857863000487");
}

TEST_CASE("verify report round-trips through its scenario echo") {
  for (const char* name : {"identity-qubit.json", "hadamard-qubit.json", "haar-qutrit.json"}) {
    const cli::RealizedScenario rs = cli::realize(cli::load_scenario(kFixtureDir + "/" + name));
    const cli::VerifyOutcome v = cli::compute_verify(rs);
    const std::string report = cli::verify_report_json(rs, v, 17);

    const nlohmann::json parsed = nlohmann::json::parse(report);
    const Scenario echoed = cli::parse_scenario(parsed.at("scenario").dump());
    const cli::RealizedScenario rs2 = cli::realize(echoed);
    const cli::VerifyOutcome v2 = cli::compute_verify(rs2);
    const std::string report2 = cli::verify_report_json(rs2, v2, 17);
    CHECK(report == report2);
  }
}

TEST_CASE("csv report flattens with the documented key order") {
  const cli::RealizedScenario rs =
      cli::realize(cli::load_scenario(kFixtureDir + "/identity-qubit.json"));
  const cli::VerifyOutcome v = cli::compute_verify(rs);
  const std::string csv = cli::verify_report_csv(rs, v, 17);
  CHECK(csv.rfind("key,value\n", 0) == 0);
  CHECK(csv.find("scenario,") != std::string::npos);
  CHECK(csv.find("eq1.full_grid,") != std::string::npos);
  CHECK(csv.find("i_tilde.0.1,undef") != std::string::npos);
  CHECK(csv.find("thermal_chain.pass,true") != std::string::npos);
  // field order is part of the format
  CHECK(csv.find("p_n.0") < csv.find("conditional.0.0"));
  CHECK(csv.find("conditional.0.0") < csv.find("joint.0.0"));
  CHECK(csv.find("joint.0.0") < csv.find("q_m.0"));
}

TEST_CASE("undefined i_tilde entries serialize as null in JSON") {
  const cli::RealizedScenario rs =
      cli::realize(cli::load_scenario(kFixtureDir + "/identity-qubit.json"));
  const cli::VerifyOutcome v = cli::compute_verify(rs);
  const nlohmann::json parsed = nlohmann::json::parse(cli::verify_report_json(rs, v, 17));
  CHECK(parsed.at("i_tilde")[0][1].is_null());
  CHECK(parsed.at("i_tilde")[0][0].is_number());
  CHECK(parsed.at("eq1").at("support_restricted").get<double>() ==
        doctest::Approx(0.60677613351703630).epsilon(1e-10));
}

TEST_CASE("thermalized scenarios add the marginal-replacement note") {
  Scenario s = cli::load_scenario(kFixtureDir + "/hadamard-qubit.json");
  s.thermalized = true;
  const cli::RealizedScenario rs = cli::realize(s);
  const cli::VerifyOutcome v = cli::compute_verify(rs);
  const nlohmann::json parsed = nlohmann::json::parse(cli::verify_report_json(rs, v, 17));
  const auto notes = parsed.at("conventions").at("notes");
  REQUIRE(notes.size() == 2);
  CHECK(notes[1].get<std::string>().find("canonical weights") != std::string::npos);
}

TEST_CASE("sweep support column increases with beta on the identity scenario") {
  // oracle: sum p_n^2 = p^2 + (1-p)^2 with p = 1/(1+e^-beta) rises with beta
  const cli::RealizedScenario rs =
      cli::realize(cli::load_scenario(kFixtureDir + "/identity-qubit.json"));
  std::vector<double> supports;
  for (int j = 0; j < 5; ++j) {
    const double beta = 0.1 + (2.0 - 0.1) * j / 4.0;
    const tpm::TpmDistribution t =
        tpm::build_tpm(rs.h_initial, beta, rs.evolution, rs.h_final,
                       rs.scenario.conventions, rs.scenario.thermalized);
    const auto avg = infotherm::exp_average(t);
    CHECK(std::abs(avg.full_grid - 1.0) <= 1e-10);
    supports.push_back(avg.support_restricted);
    const double p = 1.0 / (1.0 + std::exp(-beta));
    CHECK(avg.support_restricted ==
          doctest::Approx(p * p + (1.0 - p) * (1.0 - p)).epsilon(1e-12));
  }
  for (std::size_t j = 1; j < supports.size(); ++j) {
    CHECK(supports[j] > supports[j - 1]);
  }
}
