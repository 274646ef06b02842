// Derivative-free search over evolution unitaries for the minimum
// probability-weighted squared gap between I~[n][m] and -beta(W - dF).
// Qubits use the three-angle parameterization; higher dimensions refine a
// seeded Haar base unitary with a Hermitian-generator exponential.
#pragma once

#include <cstdint>
#include <vector>

#include "tpmwork/matkit.hpp"
#include "tpmwork/qstate.hpp"
#include "tpmwork/tpm.hpp"

namespace tpmwork::protosearch {

struct SearchBudget {
  std::size_t starts = 32;
  std::size_t max_iterations = 400;  // per start
  std::uint64_t seed = 1;
};

struct SearchResult {
  std::vector<double> best_params;  // angles for d = 2, generator coefficients otherwise
  matkit::ComplexMatrix best_unitary;
  double objective_value = 0.0;
  double max_abs_residual = 0.0;
  std::size_t starts = 0;
  std::size_t iterations_used = 0;
  bool converged = false;
};

// sum over defined entries of p_nm * residual^2, plus 10x the probability
// mass sitting on undefined entries so collapsing support is never rewarded.
// Residuals are taken under `conventions` (paper signs by default upstream).
double objective(const qstate::Hamiltonian& hi, double beta, const qstate::Hamiltonian& hf,
                 const matkit::ComplexMatrix& u, tpm::Conventions conventions, bool thermalized);

// Multistart Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5); a start converges when the simplex diameter drops below 1e-10
// or the objective spread below 1e-14. Start 0 is always the identity
// evolution; the rest are seeded draws. Deterministic for a given budget.
// Exhausting max_iterations is not an error: the result just carries
// converged = false.
SearchResult search(const qstate::Hamiltonian& hi, double beta, const qstate::Hamiltonian& hf,
                    tpm::Conventions conventions, bool thermalized, const SearchBudget& budget);

}  // namespace tpmwork::protosearch
