#include "tpmwork/protosearch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>

#include "tpmwork/infotherm.hpp"
#include "tpmwork/rng.hpp"

namespace tpmwork::protosearch {

namespace {

constexpr double kReflection = 1.0;
constexpr double kExpansion = 2.0;
constexpr double kContraction = 0.5;
constexpr double kShrink = 0.5;
constexpr double kDiameterTol = 1e-10;
constexpr double kSpreadTol = 1e-14;

struct NelderMeadOutcome {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

NelderMeadOutcome nelder_mead(const std::function<double(std::span<const double>)>& f,
                              std::span<const double> start, double step,
                              std::size_t max_iterations) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  NelderMeadOutcome out;
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim == 0 ? 0 : dim - 1];

    double diameter = 0.0;
    for (std::size_t a = 0; a <= dim; ++a) {
      for (std::size_t b = a + 1; b <= dim; ++b) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          const double diff = simplex[a][i] - simplex[b][i];
          d2 += diff * diff;
        }
        diameter = std::max(diameter, std::sqrt(d2));
      }
    }
    if (diameter < kDiameterTol || values[worst] - values[best] < kSpreadTol) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    std::vector<double> reflected(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      reflected[i] = centroid[i] + kReflection * (centroid[i] - simplex[worst][i]);
    }
    const double f_reflected = f(reflected);

    if (f_reflected < values[best]) {
      std::vector<double> expanded(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        expanded[i] = centroid[i] + kExpansion * (centroid[i] - simplex[worst][i]);
      }
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = std::move(expanded);
        values[worst] = f_expanded;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = std::move(reflected);
      values[worst] = f_reflected;
      continue;
    }

    std::vector<double> contracted(dim);
    if (f_reflected < values[worst]) {
      for (std::size_t i = 0; i < dim; ++i) {
        contracted[i] = centroid[i] + kContraction * (reflected[i] - centroid[i]);
      }
      const double f_contracted = f(contracted);
      if (f_contracted <= f_reflected) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contracted;
        continue;
      }
    } else {
      for (std::size_t i = 0; i < dim; ++i) {
        contracted[i] = centroid[i] - kContraction * (centroid[i] - simplex[worst][i]);
      }
      const double f_contracted = f(contracted);
      if (f_contracted < values[worst]) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contracted;
        continue;
      }
    }

    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < dim; ++i) {
        simplex[v][i] = simplex[best][i] + kShrink * (simplex[v][i] - simplex[best][i]);
      }
      values[v] = f(simplex[v]);
    }
  }

  std::size_t best = 0;
  for (std::size_t v = 1; v <= dim; ++v) {
    if (values[v] < values[best]) best = v;
  }
  out.x = simplex[best];
  out.fx = values[best];
  return out;
}

// e^{iH} for Hermitian H, via the spectral decomposition.
matkit::ComplexMatrix unitary_exponential(const matkit::ComplexMatrix& h) {
  const matkit::Spectrum spec = matkit::eigh(h);
  const std::size_t n = h.rows();
  matkit::ComplexMatrix scaled = spec.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const matkit::Complex w = std::polar(1.0, spec.eigenvalues[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= w;
  }
  return scaled * spec.eigenvectors.adjoint();
}

// Hermitian generator from d^2 real coefficients: d diagonal entries, then
// (re, im) pairs for the upper triangle in row-major order.
matkit::ComplexMatrix generator_from_params(std::span<const double> x, std::size_t dim) {
  matkit::ComplexMatrix h(dim, dim);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = matkit::Complex(x[idx++], 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double re = x[idx++];
      const double im = x[idx++];
      h(i, j) = matkit::Complex(re, im);
      h(j, i) = matkit::Complex(re, -im);
    }
  }
  return h;
}

}  // namespace

double objective(const qstate::Hamiltonian& hi, double beta, const qstate::Hamiltonian& hf,
                 const matkit::ComplexMatrix& u, tpm::Conventions conventions, bool thermalized) {
  const tpm::TpmDistribution t =
      tpm::build_tpm(hi, beta, tpm::Evolution::from_matrix(u), hf, conventions, thermalized);
  const infotherm::ResidualReport report = infotherm::residuals(t, conventions);
  return report.info.weighted_sq_residual + 10.0 * report.info.undefined_mass;
}

SearchResult search(const qstate::Hamiltonian& hi, double beta, const qstate::Hamiltonian& hf,
                    tpm::Conventions conventions, bool thermalized, const SearchBudget& budget) {
  if (budget.starts < 1) throw std::invalid_argument("search: starts must be >= 1");
  if (budget.max_iterations < 100) {
    throw std::invalid_argument("search: max_iterations must be >= 100");
  }
  const std::size_t dim = hi.dim();
  if (hf.dim() != dim) {
    throw tpm::DimensionMismatchError("search: H_i and H_f dimensions differ");
  }

  rng::Xoshiro256pp gen(budget.seed);
  SearchResult result;
  result.starts = budget.starts;
  double best_value = std::numeric_limits<double>::infinity();

  for (std::size_t start = 0; start < budget.starts; ++start) {
    if (dim == 2) {
      const auto f = [&](std::span<const double> x) {
        return objective(hi, beta, hf, tpm::Evolution::qubit_euler(x[0], x[1], x[2]).matrix(),
                         conventions, thermalized);
      };
      std::vector<double> x0(3, 0.0);
      if (start > 0) {
        x0[0] = gen.uniform01() * std::numbers::pi;
        x0[1] = gen.uniform01() * 2.0 * std::numbers::pi;
        x0[2] = gen.uniform01() * 2.0 * std::numbers::pi;
      }
      const NelderMeadOutcome run = nelder_mead(f, x0, 0.5, budget.max_iterations);
      result.iterations_used += run.iterations;
      if (run.fx < best_value) {
        best_value = run.fx;
        result.best_params = run.x;
        result.best_unitary = tpm::Evolution::qubit_euler(run.x[0], run.x[1], run.x[2]).matrix();
        result.converged = run.converged;
      }
    } else {
      const matkit::ComplexMatrix base =
          start == 0 ? matkit::ComplexMatrix::identity(dim)
                     : tpm::Evolution::haar_random(dim, gen.next()).matrix();
      const auto f = [&](std::span<const double> x) {
        const matkit::ComplexMatrix u = base * unitary_exponential(generator_from_params(x, dim));
        return objective(hi, beta, hf, u, conventions, thermalized);
      };
      std::vector<double> x0(dim * dim, 0.0);
      const NelderMeadOutcome run = nelder_mead(f, x0, 0.15, budget.max_iterations);
      result.iterations_used += run.iterations;
      if (run.fx < best_value) {
        best_value = run.fx;
        result.best_params = run.x;
        result.best_unitary = base * unitary_exponential(generator_from_params(run.x, dim));
        result.converged = run.converged;
      }
    }
  }

  result.objective_value = best_value;
  const tpm::TpmDistribution best_t = tpm::build_tpm(
      hi, beta, tpm::Evolution::from_matrix(result.best_unitary), hf, conventions, thermalized);
  result.max_abs_residual = infotherm::residuals(best_t, conventions).info.max_abs_residual;
  return result;
}

}  // namespace tpmwork::protosearch
