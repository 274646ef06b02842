// Scenario files: a single JSON document naming the Hamiltonians, the inverse
// temperature, the evolution, the conventions and the thermalization flag.
// Parsing validates every module precondition before any computation runs;
// a ScenarioError message always names the offending field.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "tpmwork/matkit.hpp"
#include "tpmwork/qstate.hpp"
#include "tpmwork/tpm.hpp"

namespace tpmwork::cli {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HamiltonianSpec {
  enum class Kind { eigenvalues, eigensystem, matrix, same_as_initial };
  Kind kind = Kind::eigenvalues;
  std::vector<double> eigenvalues;
  matkit::ComplexMatrix basis;   // eigensystem only
  matkit::ComplexMatrix matrix;  // matrix only
};

struct EvolutionSpec {
  enum class Kind { identity, hadamard, euler, matrix, haar };
  Kind kind = Kind::identity;
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;
  matkit::ComplexMatrix matrix;
  std::uint64_t seed = 0;
};

struct Scenario {
  std::optional<std::string> description;
  std::size_t dim = 0;
  double beta = 0.0;
  HamiltonianSpec h_initial;
  HamiltonianSpec h_final;
  EvolutionSpec evolution;
  tpm::Conventions conventions;
  bool thermalized = false;
};

// Hamiltonians and evolution realized from the scenario description.
struct RealizedScenario {
  Scenario scenario;
  qstate::Hamiltonian h_initial;
  qstate::Hamiltonian h_final;
  tpm::Evolution evolution;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// Builds the domain objects. NumericError subclasses (non-Hermitian input,
// non-unitary evolution, ...) propagate to the caller.
RealizedScenario realize(const Scenario& scenario);

const char* work_sign_name(tpm::WorkSign w);
const char* delta_f_name(qstate::DeltaFConvention c);

}  // namespace tpmwork::cli
