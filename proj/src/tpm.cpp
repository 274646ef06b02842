#include "tpmwork/tpm.hpp"

#include <cmath>
#include <string>

#include "tpmwork/rng.hpp"

namespace tpmwork::tpm {

namespace {

constexpr double kBoundaryClamp = 1e-12;

double clamp01(double x) {
  if (x < 0.0 && x >= -kBoundaryClamp) return 0.0;
  if (x > 1.0 && x <= 1.0 + kBoundaryClamp) return 1.0;
  return x;
}

}  // namespace

Evolution::Evolution(EvolutionKind kind, matkit::ComplexMatrix matrix)
    : kind_(kind), matrix_(std::move(matrix)) {
  if (!matkit::is_unitary(matrix_, 1e-10)) {
    throw NotUnitaryError("evolution: matrix is not unitary within 1e-10");
  }
}

Evolution Evolution::identity(std::size_t dim) {
  return Evolution(EvolutionKind::identity, matkit::ComplexMatrix::identity(dim));
}

Evolution Evolution::from_matrix(matkit::ComplexMatrix u) {
  if (!u.square()) {
    throw NotUnitaryError("evolution: matrix must be square");
  }
  return Evolution(EvolutionKind::explicit_matrix, std::move(u));
}

Evolution Evolution::qubit_euler(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  matkit::ComplexMatrix u(2, 2);
  u(0, 0) = matkit::Complex(c, 0.0);
  u(0, 1) = -std::polar(s, lambda);
  u(1, 0) = std::polar(s, phi);
  u(1, 1) = std::polar(c, phi + lambda);
  return Evolution(EvolutionKind::qubit_euler, std::move(u));
}

Evolution Evolution::haar_random(std::size_t dim, std::uint64_t seed) {
  rng::Xoshiro256pp gen(seed);
  matkit::ComplexMatrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      a(i, j) = matkit::Complex(gen.normal(), gen.normal());
    }
  }
  // Modified Gram-Schmidt column by column, with one re-orthogonalization
  // pass. R's diagonal is real positive, so Q itself carries the Haar measure.
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        matkit::Complex overlap(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) overlap += std::conj(a(i, k)) * a(i, j);
        for (std::size_t i = 0; i < dim; ++i) a(i, j) -= overlap * a(i, k);
      }
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm2 += std::norm(a(i, j));
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < dim; ++i) a(i, j) *= inv;
  }
  return Evolution(EvolutionKind::haar_random, std::move(a));
}

matkit::RealMatrix conditional_matrix(const qstate::Hamiltonian& hi, const Evolution& u,
                                      const qstate::Hamiltonian& hf) {
  const std::size_t dim = hi.dim();
  if (hf.dim() != dim || u.dim() != dim) {
    throw DimensionMismatchError("conditional_matrix: dimensions of H_i, U, H_f differ");
  }
  if (!matkit::is_unitary(u.matrix(), 1e-10)) {
    throw NotUnitaryError("conditional_matrix: evolution is not unitary within 1e-10");
  }

  // Amplitudes between eigenstates: M(l, k) = <f_l| U |i_k>.
  const matkit::ComplexMatrix amplitudes =
      hf.spectrum().eigenvectors.adjoint() * (u.matrix() * hi.spectrum().eigenvectors);

  const auto& levels_i = hi.levels();
  const auto& levels_f = hf.levels();
  matkit::RealMatrix c(levels_i.size(), levels_f.size());
  for (std::size_t n = 0; n < levels_i.size(); ++n) {
    for (std::size_t m = 0; m < levels_f.size(); ++m) {
      double sum = 0.0;
      for (std::size_t k = hi.level_offset(n); k < hi.level_offset(n) + levels_i[n].multiplicity;
           ++k) {
        for (std::size_t l = hf.level_offset(m);
             l < hf.level_offset(m) + levels_f[m].multiplicity; ++l) {
          sum += std::norm(amplitudes(l, k));
        }
      }
      c(n, m) = clamp01(sum / static_cast<double>(levels_i[n].multiplicity));
    }
  }
  return c;
}

TpmDistribution build_tpm(const qstate::Hamiltonian& hi, double beta, const Evolution& u,
                          const qstate::Hamiltonian& hf, Conventions conventions,
                          bool thermalized) {
  qstate::GibbsEnsemble gi = qstate::gibbs(hi, beta);
  qstate::GibbsEnsemble gf = qstate::gibbs(hf, beta);
  matkit::RealMatrix conditional = conditional_matrix(hi, u, hf);

  const std::size_t ni = hi.levels().size();
  const std::size_t nf = hf.levels().size();

  matkit::RealMatrix joint(ni, nf);
  for (std::size_t n = 0; n < ni; ++n) {
    for (std::size_t m = 0; m < nf; ++m) {
      joint(n, m) = gi.probabilities[n] * conditional(n, m);
    }
  }

  std::vector<double> marginal(nf, 0.0);
  if (thermalized) {
    marginal = gf.probabilities;
  } else {
    // Column sums in ascending n; kept bit-identical to this order.
    for (std::size_t m = 0; m < nf; ++m) {
      double q = 0.0;
      for (std::size_t n = 0; n < ni; ++n) q += joint(n, m);
      marginal[m] = q;
    }
  }

  matkit::RealMatrix work(ni, nf);
  for (std::size_t n = 0; n < ni; ++n) {
    for (std::size_t m = 0; m < nf; ++m) {
      const double paper_work = hi.levels()[n].energy - hf.levels()[m].energy;
      work(n, m) = conventions.work_sign == WorkSign::paper ? paper_work : -paper_work;
    }
  }

  const double delta_f = qstate::free_energy_difference(gi, gf, conventions.delta_f);

  return TpmDistribution{beta,
                         std::move(gi),
                         std::move(gf),
                         std::move(conditional),
                         std::move(joint),
                         std::move(marginal),
                         std::move(work),
                         delta_f,
                         conventions,
                         thermalized};
}

ChainCheck thermal_chain_check(const TpmDistribution& t) {
  const auto& levels_i = t.initial_h().levels();
  const auto& levels_f = t.final_h().levels();
  const double beta = t.beta;

  // ln(Z_f / Z_i) = -beta * delta_f under the paper sign.
  const double log_z_ratio = t.final_thermal.log_partition - t.initial.log_partition;

  double conditional_form = 0.0;
  double log_form = 0.0;
  double work_form = 0.0;
  for (std::size_t n = 0; n < levels_i.size(); ++n) {
    const double g_n = static_cast<double>(levels_i[n].multiplicity);
    const double state_prob = t.initial.probabilities[n] / g_n;  // e^{-beta E_n}/Z_i
    for (std::size_t m = 0; m < levels_f.size(); ++m) {
      const double g_m = static_cast<double>(levels_f[m].multiplicity);
      const double canonical_weight = t.final_thermal.probabilities[m] / g_m;
      conditional_form += g_n * t.conditional(n, m) * canonical_weight;
      log_form += t.joint(n, m) * std::exp(-std::log(state_prob)) * canonical_weight;
      const double j = t.joint(n, m);
      if (j > 0.0) {
        work_form += std::exp(std::log(j) -
                              beta * (levels_f[m].energy - levels_i[n].energy) - log_z_ratio);
      }
    }
  }
  return ChainCheck{conditional_form, log_form, work_form};
}

void validate_distribution(const TpmDistribution& t) {
  const std::size_t ni = t.conditional.rows();
  const std::size_t nf = t.conditional.cols();
  for (std::size_t n = 0; n < ni; ++n) {
    double row = 0.0;
    for (std::size_t m = 0; m < nf; ++m) {
      if (t.conditional(n, m) < 0.0 || t.joint(n, m) < 0.0) {
        throw NormalizationError("tpm: negative probability entry at row " + std::to_string(n));
      }
      row += t.conditional(n, m);
    }
    if (std::abs(row - 1.0) > 1e-12) {
      throw NormalizationError("tpm: conditional row " + std::to_string(n) +
                               " does not sum to 1 within 1e-12");
    }
  }
  double joint_total = 0.0;
  for (std::size_t n = 0; n < ni; ++n) {
    for (std::size_t m = 0; m < nf; ++m) joint_total += t.joint(n, m);
  }
  if (std::abs(joint_total - 1.0) > 1e-12) {
    throw NormalizationError("tpm: joint distribution does not sum to 1 within 1e-12");
  }
  double marginal_total = 0.0;
  for (double q : t.marginal) {
    if (q < 0.0) throw NormalizationError("tpm: negative marginal entry");
    marginal_total += q;
  }
  if (std::abs(marginal_total - 1.0) > 1e-12) {
    throw NormalizationError("tpm: marginal does not sum to 1 within 1e-12");
  }
}

}  // namespace tpmwork::tpm
