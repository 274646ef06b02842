#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tpmwork/commands.hpp"

namespace {

tpmwork::cli::Format parse_format(const std::string& name) {
  return name == "csv" ? tpmwork::cli::Format::csv : tpmwork::cli::Format::json;
}

}  // namespace

int main(int argc, char** argv) {
  using tpmwork::cli::Format;

  CLI::App app{"Two-point-measurement work statistics: verification, sampling, unitary search"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path = "-";
  std::string format = "json";
  std::string sweep_format = "csv";

  auto add_common = [&](CLI::App* cmd, std::string& fmt) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--format", fmt, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out_path, "output path, '-' for stdout");
  };

  CLI::App* verify = app.add_subcommand(
      "verify", "build the distribution and check the exponential-average identities");
  add_common(verify, format);

  std::size_t shots = 10000;
  std::uint64_t seed = 1;
  std::string observable = "exp_jarzynski";
  CLI::App* sample =
      app.add_subcommand("sample", "Monte Carlo estimate of an observable at finite shots");
  add_common(sample, format);
  sample->add_option("--shots", shots, "number of protocol runs");
  sample->add_option("--seed", seed, "generator seed");
  sample->add_option("--observable", observable, "observable to estimate")
      ->check(CLI::IsMember({"exp_neg_i_tilde", "exp_jarzynski", "work_mean"}));

  std::size_t starts = 32;
  std::size_t max_iterations = 400;
  std::uint64_t search_seed = 1;
  CLI::App* search = app.add_subcommand(
      "search", "minimize the pointwise residual over evolution unitaries");
  add_common(search, format);
  search->add_option("--starts", starts, "multistart count");
  search->add_option("--max-iter", max_iterations, "iteration cap per start");
  search->add_option("--seed", search_seed, "start-draw seed");

  std::string param = "beta";
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate the identities over a parameter grid");
  add_common(sweep, sweep_format);
  sweep->add_option("--param", param, "swept parameter (only beta)");
  sweep->add_option("--from", from, "grid start")->required();
  sweep->add_option("--to", to, "grid end")->required();
  sweep->add_option("--steps", steps, "grid point count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (verify->parsed()) {
    return tpmwork::cli::cmd_verify(scenario_path, parse_format(format), out_path);
  }
  if (sample->parsed()) {
    tpmwork::sampler::Observable obs = tpmwork::sampler::Observable::exp_jarzynski;
    if (observable == "exp_neg_i_tilde") obs = tpmwork::sampler::Observable::exp_neg_i_tilde;
    if (observable == "work_mean") obs = tpmwork::sampler::Observable::work_mean;
    return tpmwork::cli::cmd_sample(scenario_path, shots, seed, obs, parse_format(format),
                                    out_path);
  }
  if (search->parsed()) {
    return tpmwork::cli::cmd_search(scenario_path, starts, max_iterations, search_seed,
                                    parse_format(format), out_path);
  }
  return tpmwork::cli::cmd_sweep(scenario_path, param, from, to, steps,
                                 parse_format(sweep_format), out_path);
}
