#include "tpmwork/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tpmwork::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError("scenario field '" + field + "': " + what);
}

double read_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

matkit::Complex read_complex(const json& j, const std::string& field) {
  if (j.is_number()) return matkit::Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    const matkit::Complex z(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail(field, "must be finite");
    return z;
  }
  fail(field, "expected a number or an [re, im] pair");
}

matkit::ComplexMatrix read_matrix(const json& j, std::size_t dim, const std::string& field) {
  if (!j.is_array() || j.size() != dim) {
    fail(field, "expected an array of " + std::to_string(dim) + " rows");
  }
  matkit::ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!j[i].is_array() || j[i].size() != dim) {
      fail(field, "row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      m(i, k) = read_complex(j[i][k], field + "[" + std::to_string(i) + "][" +
                                          std::to_string(k) + "]");
    }
  }
  return m;
}

HamiltonianSpec read_hamiltonian(const json& j, std::size_t dim, const std::string& field,
                                 bool allow_same_as_initial) {
  HamiltonianSpec spec;
  if (j.is_string()) {
    if (allow_same_as_initial && j.get<std::string>() == "same-as-initial") {
      spec.kind = HamiltonianSpec::Kind::same_as_initial;
      return spec;
    }
    fail(field, allow_same_as_initial ? "the only string form is \"same-as-initial\""
                                      : "expected an object");
  }
  if (!j.is_object()) fail(field, "expected an object");
  const bool has_eigenvalues = j.contains("eigenvalues");
  const bool has_matrix = j.contains("matrix");
  if (has_eigenvalues == has_matrix) {
    fail(field, "expected exactly one of \"eigenvalues\" or \"matrix\"");
  }
  if (has_matrix) {
    spec.kind = HamiltonianSpec::Kind::matrix;
    spec.matrix = read_matrix(j["matrix"], dim, field + ".matrix");
    return spec;
  }
  const json& ev = j["eigenvalues"];
  if (!ev.is_array() || ev.size() != dim) {
    fail(field + ".eigenvalues", "expected an array of " + std::to_string(dim) + " numbers");
  }
  spec.eigenvalues.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    spec.eigenvalues.push_back(
        read_number(ev[i], field + ".eigenvalues[" + std::to_string(i) + "]"));
  }
  if (j.contains("basis")) {
    spec.kind = HamiltonianSpec::Kind::eigensystem;
    spec.basis = read_matrix(j["basis"], dim, field + ".basis");
  } else {
    spec.kind = HamiltonianSpec::Kind::eigenvalues;
  }
  return spec;
}

EvolutionSpec read_evolution(const json& j, std::size_t dim) {
  EvolutionSpec spec;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "identity") {
      spec.kind = EvolutionSpec::Kind::identity;
      return spec;
    }
    if (name == "hadamard") {
      if (dim != 2) fail("evolution", "\"hadamard\" requires dim = 2");
      spec.kind = EvolutionSpec::Kind::hadamard;
      return spec;
    }
    fail("evolution", "unknown shorthand \"" + name + "\" (use \"identity\" or \"hadamard\")");
  }
  if (!j.is_object()) fail("evolution", "expected a string shorthand or an object");
  const int forms = static_cast<int>(j.contains("euler")) + static_cast<int>(j.contains("matrix")) +
                    static_cast<int>(j.contains("haar"));
  if (forms != 1) fail("evolution", "expected exactly one of \"euler\", \"matrix\", \"haar\"");
  if (j.contains("euler")) {
    if (dim != 2) fail("evolution.euler", "requires dim = 2");
    const json& e = j["euler"];
    if (!e.is_object()) fail("evolution.euler", "expected an object");
    for (const char* angle : {"theta", "phi", "lambda"}) {
      if (!e.contains(angle)) fail(std::string("evolution.euler.") + angle, "missing");
    }
    spec.kind = EvolutionSpec::Kind::euler;
    spec.theta = read_number(e["theta"], "evolution.euler.theta");
    spec.phi = read_number(e["phi"], "evolution.euler.phi");
    spec.lambda = read_number(e["lambda"], "evolution.euler.lambda");
    return spec;
  }
  if (j.contains("matrix")) {
    spec.kind = EvolutionSpec::Kind::matrix;
    spec.matrix = read_matrix(j["matrix"], dim, "evolution.matrix");
    return spec;
  }
  const json& h = j["haar"];
  if (!h.is_object() || !h.contains("seed") || !h["seed"].is_number_unsigned()) {
    fail("evolution.haar.seed", "expected an unsigned integer");
  }
  spec.kind = EvolutionSpec::Kind::haar;
  spec.seed = h["seed"].get<std::uint64_t>();
  return spec;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario field 'root': expected a JSON object");

  Scenario s;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) fail("description", "expected a string");
    s.description = doc["description"].get<std::string>();
  }

  if (!doc.contains("dim")) fail("dim", "missing");
  if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::uint64_t>() == 0) {
    fail("dim", "expected a positive integer");
  }
  s.dim = doc["dim"].get<std::size_t>();

  if (!doc.contains("beta")) fail("beta", "missing");
  s.beta = read_number(doc["beta"], "beta");
  if (!(s.beta > 0.0)) fail("beta", "must be > 0");

  if (!doc.contains("h_initial")) fail("h_initial", "missing");
  s.h_initial = read_hamiltonian(doc["h_initial"], s.dim, "h_initial", false);

  if (!doc.contains("evolution")) fail("evolution", "missing");
  s.evolution = read_evolution(doc["evolution"], s.dim);

  if (!doc.contains("h_final")) fail("h_final", "missing");
  s.h_final = read_hamiltonian(doc["h_final"], s.dim, "h_final", true);

  if (doc.contains("conventions")) {
    const json& c = doc["conventions"];
    if (!c.is_object()) fail("conventions", "expected an object");
    if (c.contains("work_sign")) {
      const std::string v = c["work_sign"].is_string() ? c["work_sign"].get<std::string>() : "";
      if (v == "paper") {
        s.conventions.work_sign = tpm::WorkSign::paper;
      } else if (v == "standard") {
        s.conventions.work_sign = tpm::WorkSign::standard;
      } else {
        fail("conventions.work_sign", "expected \"paper\" or \"standard\"");
      }
    }
    if (c.contains("delta_f")) {
      const std::string v = c["delta_f"].is_string() ? c["delta_f"].get<std::string>() : "";
      if (v == "paper") {
        s.conventions.delta_f = qstate::DeltaFConvention::paper;
      } else if (v == "standard") {
        s.conventions.delta_f = qstate::DeltaFConvention::standard;
      } else {
        fail("conventions.delta_f", "expected \"paper\" or \"standard\"");
      }
    }
  }

  if (doc.contains("thermalized")) {
    if (!doc["thermalized"].is_boolean()) fail("thermalized", "expected a boolean");
    s.thermalized = doc["thermalized"].get<bool>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

namespace {

qstate::Hamiltonian realize_hamiltonian(const HamiltonianSpec& spec) {
  switch (spec.kind) {
    case HamiltonianSpec::Kind::matrix:
      return qstate::Hamiltonian::from_matrix(spec.matrix);
    case HamiltonianSpec::Kind::eigensystem:
      return qstate::Hamiltonian::from_eigensystem(spec.eigenvalues, spec.basis);
    case HamiltonianSpec::Kind::eigenvalues:
    default:
      return qstate::Hamiltonian::from_eigenvalues(spec.eigenvalues);
  }
}

}  // namespace

RealizedScenario realize(const Scenario& scenario) {
  qstate::Hamiltonian hi = realize_hamiltonian(scenario.h_initial);
  qstate::Hamiltonian hf = scenario.h_final.kind == HamiltonianSpec::Kind::same_as_initial
                               ? realize_hamiltonian(scenario.h_initial)
                               : realize_hamiltonian(scenario.h_final);

  const EvolutionSpec& ev = scenario.evolution;
  tpm::Evolution evolution = [&]() -> tpm::Evolution {
    switch (ev.kind) {
      case EvolutionSpec::Kind::identity:
        return tpm::Evolution::identity(scenario.dim);
      case EvolutionSpec::Kind::hadamard: {
        const double s = 1.0 / std::sqrt(2.0);
        matkit::ComplexMatrix h(2, 2);
        h(0, 0) = h(0, 1) = h(1, 0) = matkit::Complex(s, 0.0);
        h(1, 1) = matkit::Complex(-s, 0.0);
        return tpm::Evolution::from_matrix(std::move(h));
      }
      case EvolutionSpec::Kind::euler:
        return tpm::Evolution::qubit_euler(ev.theta, ev.phi, ev.lambda);
      case EvolutionSpec::Kind::matrix:
        return tpm::Evolution::from_matrix(ev.matrix);
      case EvolutionSpec::Kind::haar:
      default:
        return tpm::Evolution::haar_random(scenario.dim, ev.seed);
    }
  }();

  return RealizedScenario{scenario, std::move(hi), std::move(hf), std::move(evolution)};
}

const char* work_sign_name(tpm::WorkSign w) {
  return w == tpm::WorkSign::paper ? "paper" : "standard";
}

const char* delta_f_name(qstate::DeltaFConvention c) {
  return c == qstate::DeltaFConvention::paper ? "paper" : "standard";
}

}  // namespace tpmwork::cli
