// Two-point-measurement statistics for a scenario (H_i, beta, U, H_f):
// conditional/joint/marginal outcome tables, work values, and the
// three-expression thermal chain check. The thermalized flag models the
// relaxation step by replacing the outcome marginal with the canonical
// weights of H_f while leaving the conditional matrix untouched.
#pragma once

#include <cstdint>
#include <vector>

#include "tpmwork/matkit.hpp"
#include "tpmwork/qstate.hpp"

namespace tpmwork::tpm {

class DimensionMismatchError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

class NotUnitaryError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

class NormalizationError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

// Sign of the work entries: "paper" stores W = E_n^i - E_m^f, "standard"
// stores W = E_m^f - E_n^i.
enum class WorkSign { paper, standard };

struct Conventions {
  WorkSign work_sign = WorkSign::paper;
  qstate::DeltaFConvention delta_f = qstate::DeltaFConvention::paper;
};

enum class EvolutionKind { identity, explicit_matrix, qubit_euler, haar_random };

// A realized evolution unitary. Factories validate unitarity at 1e-10.
class Evolution {
 public:
  static Evolution identity(std::size_t dim);
  static Evolution from_matrix(matkit::ComplexMatrix u);
  // U(theta, phi, lambda) = [[cos(t/2), -e^{i lambda} sin(t/2)],
  //                          [e^{i phi} sin(t/2), e^{i(phi+lambda)} cos(t/2)]]
  static Evolution qubit_euler(double theta, double phi, double lambda);
  // Ginibre draw orthonormalized by modified Gram-Schmidt; the positive
  // R diagonal makes the result Haar-distributed. Deterministic per seed.
  static Evolution haar_random(std::size_t dim, std::uint64_t seed);

  EvolutionKind kind() const { return kind_; }
  std::size_t dim() const { return matrix_.rows(); }
  const matkit::ComplexMatrix& matrix() const { return matrix_; }

 private:
  Evolution(EvolutionKind kind, matkit::ComplexMatrix matrix);

  EvolutionKind kind_;
  matkit::ComplexMatrix matrix_;
};

// Joint work/outcome statistics over energy levels (degeneracy-aware: index
// n runs over clusters of H_i, m over clusters of H_f).
struct TpmDistribution {
  double beta;
  qstate::GibbsEnsemble initial;        // Gibbs ensemble of H_i
  qstate::GibbsEnsemble final_thermal;  // canonical ensemble of H_f at the same beta
  matkit::RealMatrix conditional;       // C[n][m] = Tr[Q_m U P_n U^dagger] / g_n
  matkit::RealMatrix joint;             // J[n][m] = p_n C[n][m]
  std::vector<double> marginal;         // q_m: column sums, or canonical if thermalized
  matkit::RealMatrix work;              // W[n][m], sign per conventions.work_sign
  double delta_f;                       // per conventions.delta_f
  Conventions conventions;
  bool thermalized;

  const qstate::Hamiltonian& initial_h() const { return initial.hamiltonian; }
  const qstate::Hamiltonian& final_h() const { return final_thermal.hamiltonian; }
};

// Row-stochastic level-to-level transition table. Entries within 1e-12 of
// the [0,1] boundary are clamped onto it.
matkit::RealMatrix conditional_matrix(const qstate::Hamiltonian& hi, const Evolution& u,
                                      const qstate::Hamiltonian& hf);

TpmDistribution build_tpm(const qstate::Hamiltonian& hi, double beta, const Evolution& u,
                          const qstate::Hamiltonian& hf, Conventions conventions,
                          bool thermalized);

// The three expressions of the thermal equality chain, evaluated literally
// (conditional form, log form, work form); each equals 1 by unitality. The
// paper work/delta_f conventions are forced for this check regardless of the
// distribution's stored ones.
struct ChainCheck {
  double conditional_form;
  double log_form;
  double work_form;
};

ChainCheck thermal_chain_check(const TpmDistribution& t);

// Throws NormalizationError if row sums, joint total, marginal total, or
// entry signs breach their 1e-12 contracts.
void validate_distribution(const TpmDistribution& t);

}  // namespace tpmwork::tpm
