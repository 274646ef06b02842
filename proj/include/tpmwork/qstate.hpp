// Thermodynamic domain objects: Hamiltonians with rank-aware eigenprojectors,
// canonical (Gibbs) ensembles, partition functions and free energies.
#pragma once

#include <optional>
#include <vector>

#include "tpmwork/matkit.hpp"

namespace tpmwork::qstate {

class NotUnitaryBasisError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

class BetaMismatchError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

class ZeroTemperatureError : public matkit::NumericError {
 public:
  using matkit::NumericError::NumericError;
};

// One degeneracy cluster: energy, rank, and the projector onto its eigenspace.
struct EnergyLevel {
  double energy;
  std::size_t multiplicity;
  matkit::ComplexMatrix projector;
};

class Hamiltonian {
 public:
  static Hamiltonian from_matrix(const matkit::ComplexMatrix& h);
  // Explicit eigensystem; basis columns are eigenvectors and must form a
  // unitary within 1e-10, else NotUnitaryBasisError. Eigenvalues may arrive
  // unsorted; they are sorted ascending with the basis columns permuted along.
  static Hamiltonian from_eigensystem(std::vector<double> eigenvalues,
                                      matkit::ComplexMatrix basis);
  static Hamiltonian from_eigenvalues(std::vector<double> eigenvalues);

  std::size_t dim() const { return spectrum_.eigenvalues.size(); }
  const matkit::Spectrum& spectrum() const { return spectrum_; }
  const std::vector<EnergyLevel>& levels() const { return levels_; }
  const matkit::ComplexMatrix& matrix() const { return matrix_; }
  // First eigenstate index of level n; states [offset, offset+multiplicity).
  std::size_t level_offset(std::size_t level) const { return offsets_[level]; }

 private:
  explicit Hamiltonian(matkit::Spectrum spectrum);

  matkit::Spectrum spectrum_;
  std::vector<EnergyLevel> levels_;
  std::vector<std::size_t> offsets_;
  matkit::ComplexMatrix matrix_;
};

// Sign convention for free energy differences. "standard" is F_f - F_i =
// -(1/beta) ln(Z_f/Z_i); "paper" is its exact negative, fixed by the identity
// exp(-beta * delta_f) = Z_i/Z_f.
enum class DeltaFConvention { paper, standard };

struct GibbsEnsemble {
  double beta;
  Hamiltonian hamiltonian;
  std::vector<double> probabilities;  // per level, multiplicity included
  double partition;                   // Z
  double log_partition;               // ln Z, computed shift-safe
  std::optional<double> free_energy;  // -(1/beta) ln Z; empty at beta = 0
};

// Canonical ensemble of h at inverse temperature beta >= 0. Energies are
// shifted by the ground energy before exponentiation so no beta in [0, 50]
// with spectra in [-5, 5] can overflow.
GibbsEnsemble gibbs(const Hamiltonian& h, double beta);

// rho = sum_n (p_n / g_n) P_n; Hermitian, unit trace, commutes with h.
matkit::ComplexMatrix density_matrix(const GibbsEnsemble& g);

// Requires gi.beta == gf.beta > 0.
double free_energy_difference(const GibbsEnsemble& gi, const GibbsEnsemble& gf,
                              DeltaFConvention convention);

}  // namespace tpmwork::qstate
