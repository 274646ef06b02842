// Information-thermodynamic verifiers: the per-outcome log-ratio matrix
// I~[n][m] = ln(p_{m|n}/q_m), its target -beta(W - dF), pointwise residuals,
// and the exponential averages under both zero-probability conventions.
#pragma once

#include <cstdint>
#include <vector>

#include "tpmwork/matkit.hpp"
#include "tpmwork/tpm.hpp"

namespace tpmwork::infotherm {

// i_tilde and residual are meaningful only where defined(n, m); an entry is
// defined exactly where the joint probability and the marginal are both
// positive. Undefined entries are data, not errors.
struct InfoMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  matkit::RealMatrix i_tilde;
  matkit::RealMatrix target;    // -beta (W[n][m] - delta_f), defined everywhere
  matkit::RealMatrix residual;  // i_tilde - target on defined entries
  std::vector<std::uint8_t> defined_mask;
  double max_abs_residual = 0.0;
  double weighted_sq_residual = 0.0;  // sum over defined of p_nm * residual^2
  double undefined_mass = 0.0;        // sum of p_nm over undefined entries

  bool defined(std::size_t n, std::size_t m) const { return defined_mask[n * cols + m] != 0; }
};

struct WeightedSample {
  double value;
  double weight;
};

// InfoMatrix plus the two probability-weighted value distributions
// (I~ and the target, both weighted by p_nm) for distribution-level
// comparison alongside the pointwise residuals.
struct ResidualReport {
  InfoMatrix info;
  std::vector<WeightedSample> i_tilde_distribution;
  std::vector<WeightedSample> target_distribution;
};

struct AverageReport {
  double full_grid;           // sum over all (n,m) of p_n q_m; no logarithm involved
  double support_restricted;  // sum over p_nm > 0 of p_n q_m
  double jarzynski;           // convention-dependent exponential work average
  double z_ratio;             // Z_f / Z_i
};

// Target follows the distribution's stored conventions.
InfoMatrix i_tilde_matrix(const tpm::TpmDistribution& t);

AverageReport exp_average(const tpm::TpmDistribution& t);

// work_sign paper: sum p_nm e^{beta (W - dF)} with the paper-sign W and dF
// (contract: 1 for every unitary evolution). work_sign standard: sum
// p_nm e^{-beta W} (contract: Z_f/Z_i). Requires beta > 0.
double jarzynski_average(const tpm::TpmDistribution& t);

// Residuals against the target under the paper conventions (the default, so
// the target reads literally -beta(W - dF) in the paper's signs), or under an
// explicit convention override.
ResidualReport residuals(const tpm::TpmDistribution& t);
ResidualReport residuals(const tpm::TpmDistribution& t, tpm::Conventions override_conventions);

}  // namespace tpmwork::infotherm
