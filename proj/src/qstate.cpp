#include "tpmwork/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tpmwork::qstate {

Hamiltonian::Hamiltonian(matkit::Spectrum spectrum) : spectrum_(std::move(spectrum)) {
  const std::size_t n = spectrum_.eigenvalues.size();
  const matkit::ComplexMatrix& v = spectrum_.eigenvectors;

  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n &&
           spectrum_.eigenvalues[end] - spectrum_.eigenvalues[end - 1] < matkit::kDegenerateGap) {
      ++end;
    }
    matkit::ComplexMatrix projector(n, n);
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          projector(i, j) += v(i, k) * std::conj(v(j, k));
        }
      }
    }
    levels_.push_back({spectrum_.eigenvalues[begin], end - begin, std::move(projector)});
    offsets_.push_back(begin);
    begin = end;
  }

  matkit::ComplexMatrix scaled = v;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= spectrum_.eigenvalues[j];
  }
  matrix_ = scaled * v.adjoint();
}

Hamiltonian Hamiltonian::from_matrix(const matkit::ComplexMatrix& h) {
  return Hamiltonian(matkit::eigh(h));
}

Hamiltonian Hamiltonian::from_eigensystem(std::vector<double> eigenvalues,
                                          matkit::ComplexMatrix basis) {
  const std::size_t n = eigenvalues.size();
  if (n == 0 || basis.rows() != n || basis.cols() != n) {
    throw NotUnitaryBasisError("from_eigensystem: basis shape does not match eigenvalue count");
  }
  for (double e : eigenvalues) {
    if (!std::isfinite(e)) {
      throw NotUnitaryBasisError("from_eigensystem: eigenvalues must be finite");
    }
  }
  if (!matkit::is_unitary(basis, 1e-10)) {
    throw NotUnitaryBasisError("from_eigensystem: basis is not unitary within 1e-10");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&eigenvalues](std::size_t a, std::size_t b) {
    return eigenvalues[a] < eigenvalues[b];
  });

  matkit::Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = matkit::ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    spec.eigenvalues[j] = eigenvalues[order[j]];
    for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, j) = basis(i, order[j]);
  }
  return Hamiltonian(std::move(spec));
}

Hamiltonian Hamiltonian::from_eigenvalues(std::vector<double> eigenvalues) {
  const std::size_t n = eigenvalues.size();
  return from_eigensystem(std::move(eigenvalues), matkit::ComplexMatrix::identity(n));
}

GibbsEnsemble gibbs(const Hamiltonian& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("gibbs: beta must be finite and >= 0");
  }
  const double e_min = h.levels().front().energy;
  std::vector<double> weights;
  weights.reserve(h.levels().size());
  double total = 0.0;
  for (const EnergyLevel& level : h.levels()) {
    const double w =
        static_cast<double>(level.multiplicity) * std::exp(-beta * (level.energy - e_min));
    weights.push_back(w);
    total += w;
  }
  for (double& w : weights) w /= total;

  const double log_z = std::log(total) - beta * e_min;
  GibbsEnsemble g{beta,
                  h,
                  std::move(weights),
                  std::exp(log_z),
                  log_z,
                  beta > 0.0 ? std::optional<double>(-log_z / beta) : std::nullopt};
  return g;
}

matkit::ComplexMatrix density_matrix(const GibbsEnsemble& g) {
  const std::size_t n = g.hamiltonian.dim();
  matkit::ComplexMatrix rho(n, n);
  for (std::size_t level = 0; level < g.hamiltonian.levels().size(); ++level) {
    const EnergyLevel& lv = g.hamiltonian.levels()[level];
    const double weight = g.probabilities[level] / static_cast<double>(lv.multiplicity);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rho(i, j) += weight * lv.projector(i, j);
      }
    }
  }
  return rho;
}

double free_energy_difference(const GibbsEnsemble& gi, const GibbsEnsemble& gf,
                              DeltaFConvention convention) {
  if (gi.beta != gf.beta) {
    throw BetaMismatchError("free_energy_difference: ensembles have different beta");
  }
  if (gi.beta == 0.0) {
    throw ZeroTemperatureError("free_energy_difference: undefined at beta = 0");
  }
  const double log_ratio = gf.log_partition - gi.log_partition;  // ln(Z_f/Z_i)
  const double paper_value = log_ratio / gi.beta;
  return convention == DeltaFConvention::paper ? paper_value : -paper_value;
}

}  // namespace tpmwork::qstate
