// Report serialization. Key order and CSV column order are fixed; every
// floating value is printed with %.Ng where N defaults to 17 significant
// digits (REPORT_PRECISION overrides, integers 6..17). Nothing time- or
// locale-dependent enters the byte stream, so fixed inputs give fixed bytes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpmwork/infotherm.hpp"
#include "tpmwork/protosearch.hpp"
#include "tpmwork/sampler.hpp"
#include "tpmwork/scenario.hpp"
#include "tpmwork/tpm.hpp"

namespace tpmwork::cli {

inline constexpr const char* kToolName = "tpmwork";
inline constexpr const char* kToolVersion = "0.1.0";

// 17 unless REPORT_PRECISION is set; throws std::runtime_error on a value
// outside 6..17.
int report_precision();

std::string format_double(double value, int precision);

// Everything cmd_verify computes, bundled for serialization.
struct VerifyOutcome {
  tpm::TpmDistribution dist;
  infotherm::InfoMatrix info;              // target under the scenario conventions
  infotherm::ResidualReport residual;      // paper conventions forced
  infotherm::AverageReport averages;
  tpm::ChainCheck chain;
  double jarzynski_expected = 0.0;
  bool eq1_pass = false;
  bool jarzynski_pass = false;
  bool chain_pass = false;
};

std::string verify_report_json(const RealizedScenario& rs, const VerifyOutcome& v, int precision);
std::string verify_report_csv(const RealizedScenario& rs, const VerifyOutcome& v, int precision);

std::string sample_report_json(const RealizedScenario& rs, const sampler::EstimatorResult& est,
                               std::uint64_t seed, int precision);
std::string sample_report_csv(const RealizedScenario& rs, const sampler::EstimatorResult& est,
                              std::uint64_t seed, int precision);

std::string search_report_json(const RealizedScenario& rs, const protosearch::SearchBudget& budget,
                               const protosearch::SearchResult& result, int precision);
std::string search_report_csv(const RealizedScenario& rs, const protosearch::SearchBudget& budget,
                              const protosearch::SearchResult& result, int precision);

struct SweepRow {
  double beta = 0.0;
  double eq1_full_grid = 0.0;
  double eq1_support_restricted = 0.0;
  double jarzynski = 0.0;
  double max_abs_residual = 0.0;
};

std::string sweep_report_csv(const std::vector<SweepRow>& rows, int precision);
std::string sweep_report_json(const RealizedScenario& rs, const std::vector<SweepRow>& rows,
                              int precision);

}  // namespace tpmwork::cli
