#include "tpmwork/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "tpmwork/infotherm.hpp"
#include "tpmwork/protosearch.hpp"

namespace tpmwork::cli {

namespace {

constexpr double kIdentityTol = 1e-10;

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path == "-" || out_path.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ScenarioError("cannot open output file: " + out_path);
  out << payload;
}

// Shared error-to-exit-code mapping; wall clock goes to stderr only.
template <typename Fn>
int run_command(const char* name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const ScenarioError& e) {
    std::cerr << "tpmwork: error: " << e.what() << "\n";
    return 1;
  } catch (const sampler::UndefinedObservableError& e) {
    std::cerr << "tpmwork: error: " << e.what() << "\n";
    return 3;
  } catch (const matkit::NumericError& e) {
    std::cerr << "tpmwork: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tpmwork: error: " << e.what() << "\n";
    return 1;
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  std::cerr << "tpmwork: " << name << " finished in " << elapsed.count() << " s\n";
  return 0;
}

tpm::TpmDistribution build_from(const RealizedScenario& rs) {
  return tpm::build_tpm(rs.h_initial, rs.scenario.beta, rs.evolution, rs.h_final,
                        rs.scenario.conventions, rs.scenario.thermalized);
}

}  // namespace

VerifyOutcome compute_verify(const RealizedScenario& rs) {
  VerifyOutcome v{build_from(rs), {}, {}, {}, {}, 0.0, false, false, false};
  tpm::validate_distribution(v.dist);
  v.info = infotherm::i_tilde_matrix(v.dist);
  v.residual = infotherm::residuals(v.dist);
  v.averages = infotherm::exp_average(v.dist);
  v.chain = tpm::thermal_chain_check(v.dist);

  v.jarzynski_expected = rs.scenario.conventions.work_sign == tpm::WorkSign::paper
                             ? 1.0
                             : v.averages.z_ratio;
  v.eq1_pass = std::abs(v.averages.full_grid - 1.0) <= kIdentityTol;
  v.jarzynski_pass = std::abs(v.averages.jarzynski - v.jarzynski_expected) <=
                     kIdentityTol * std::max(1.0, std::abs(v.jarzynski_expected));
  const double terms[3] = {v.chain.conditional_form, v.chain.log_form, v.chain.work_form};
  v.chain_pass = true;
  for (double term : terms) {
    if (std::abs(term - 1.0) > kIdentityTol) v.chain_pass = false;
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (std::abs(terms[a] - terms[b]) > kIdentityTol) v.chain_pass = false;
    }
  }
  return v;
}

int cmd_verify(const std::string& scenario_path, Format format, const std::string& out_path) {
  return run_command("verify", [&]() {
    const int precision = report_precision();
    const RealizedScenario rs = realize(load_scenario(scenario_path));
    const VerifyOutcome v = compute_verify(rs);
    write_output(out_path, format == Format::json ? verify_report_json(rs, v, precision)
                                                  : verify_report_csv(rs, v, precision));
  });
}

int cmd_sample(const std::string& scenario_path, std::size_t shots, std::uint64_t seed,
               sampler::Observable observable, Format format, const std::string& out_path) {
  return run_command("sample", [&]() {
    if (shots < 1) throw ScenarioError("--shots must be >= 1");
    const int precision = report_precision();
    const RealizedScenario rs = realize(load_scenario(scenario_path));
    const tpm::TpmDistribution t = build_from(rs);
    tpm::validate_distribution(t);
    sampler::RngState rng(seed);
    const sampler::EstimatorResult est = sampler::estimate(t, observable, shots, rng);
    write_output(out_path, format == Format::json ? sample_report_json(rs, est, seed, precision)
                                                  : sample_report_csv(rs, est, seed, precision));
  });
}

int cmd_search(const std::string& scenario_path, std::size_t starts, std::size_t max_iterations,
               std::uint64_t seed, Format format, const std::string& out_path) {
  return run_command("search", [&]() {
    if (starts < 1) throw ScenarioError("--starts must be >= 1");
    if (max_iterations < 100) throw ScenarioError("--max-iter must be >= 100");
    const int precision = report_precision();
    const RealizedScenario rs = realize(load_scenario(scenario_path));
    const protosearch::SearchBudget budget{starts, max_iterations, seed};
    const protosearch::SearchResult result =
        protosearch::search(rs.h_initial, rs.scenario.beta, rs.h_final,
                            rs.scenario.conventions, rs.scenario.thermalized, budget);
    write_output(out_path, format == Format::json
                               ? search_report_json(rs, budget, result, precision)
                               : search_report_csv(rs, budget, result, precision));
  });
}

int cmd_sweep(const std::string& scenario_path, const std::string& param, double from, double to,
              std::size_t steps, Format format, const std::string& out_path) {
  return run_command("sweep", [&]() {
    if (param != "beta") throw ScenarioError("--param supports only \"beta\"");
    if (steps < 2) throw ScenarioError("--steps must be >= 2");
    if (!(from < to)) throw ScenarioError("--from must be smaller than --to");
    if (!(from > 0.0)) throw ScenarioError("--from must be > 0 for beta sweeps");
    const int precision = report_precision();
    const RealizedScenario rs = realize(load_scenario(scenario_path));

    std::vector<SweepRow> rows;
    rows.reserve(steps);
    for (std::size_t j = 0; j < steps; ++j) {
      const double beta =
          from + (to - from) * static_cast<double>(j) / static_cast<double>(steps - 1);
      const tpm::TpmDistribution t =
          tpm::build_tpm(rs.h_initial, beta, rs.evolution, rs.h_final,
                         rs.scenario.conventions, rs.scenario.thermalized);
      const infotherm::AverageReport averages = infotherm::exp_average(t);
      const infotherm::ResidualReport residual = infotherm::residuals(t);
      rows.push_back({beta, averages.full_grid, averages.support_restricted, averages.jarzynski,
                      residual.info.max_abs_residual});
    }
    write_output(out_path, format == Format::json ? sweep_report_json(rs, rows, precision)
                                                  : sweep_report_csv(rows, precision));
  });
}

}  // namespace tpmwork::cli
