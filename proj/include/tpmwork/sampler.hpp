// Finite-shot Monte Carlo simulation of the two-point protocol: outcome pairs
// drawn by inverse CDF (level first, then the conditional row), estimators
// with standard errors and z-scores against the exact closed forms.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpmwork/rng.hpp"
#include "tpmwork/tpm.hpp"

namespace tpmwork::sampler {

class UndefinedObservableError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

using RngState = rng::Xoshiro256pp;

enum class Observable { exp_neg_i_tilde, exp_jarzynski, work_mean };

const char* observable_name(Observable obs);

struct OutcomePair {
  std::size_t n;
  std::size_t m;
};

struct EstimatorResult {
  std::string observable;
  std::size_t shots = 0;
  double mean = 0.0;
  double sample_std = 0.0;      // sqrt of the (shots-1)-normalized variance
  double standard_error = 0.0;  // sample_std / sqrt(shots)
  double exact = 0.0;           // closed form of the same observable
  double z_score = 0.0;         // (mean - exact) / standard_error; 0 when SE = 0
};

// `shots` outcome pairs; n by inverse CDF over p_n in ascending index order,
// m by inverse CDF over the conditional row, both with the last cumulative
// bin padded to exactly 1.
std::vector<OutcomePair> sample_tpm(const tpm::TpmDistribution& t, std::size_t shots,
                                    RngState& rng);

// Sample mean of the observable over fresh draws. exp_neg_i_tilde throws
// UndefinedObservableError if a sampled pair has no defined I~ value.
EstimatorResult estimate(const tpm::TpmDistribution& t, Observable obs, std::size_t shots,
                         RngState& rng);

// Same estimate split over n_streams independent streams (seed derivation per
// rng::stream_seed), each stream running on its own thread; partial moments
// are merged in stream-index order, so the result is deterministic for a
// given (seed, n_streams) no matter how the threads are scheduled.
EstimatorResult estimate_streams(const tpm::TpmDistribution& t, Observable obs,
                                 std::size_t shots, std::uint64_t seed, std::size_t n_streams);

}  // namespace tpmwork::sampler
