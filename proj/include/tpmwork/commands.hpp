// Command implementations behind the CLI front end. Exit codes: 0 success,
// 1 malformed scenario/arguments, 2 numerical validation failure,
// 3 undefined observable at a sampled pair.
#pragma once

#include <cstdint>
#include <string>

#include "tpmwork/report.hpp"
#include "tpmwork/sampler.hpp"

namespace tpmwork::cli {

enum class Format { json, csv };

VerifyOutcome compute_verify(const RealizedScenario& rs);

int cmd_verify(const std::string& scenario_path, Format format, const std::string& out_path);

int cmd_sample(const std::string& scenario_path, std::size_t shots, std::uint64_t seed,
               sampler::Observable observable, Format format, const std::string& out_path);

int cmd_search(const std::string& scenario_path, std::size_t starts, std::size_t max_iterations,
               std::uint64_t seed, Format format, const std::string& out_path);

int cmd_sweep(const std::string& scenario_path, const std::string& param, double from, double to,
              std::size_t steps, Format format, const std::string& out_path);

}  // namespace tpmwork::cli
