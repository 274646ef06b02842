#include "tpmwork/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace tpmwork::cli {

namespace {

// Ordered streaming JSON writer. Objects outside arrays are pretty-printed
// with two-space indentation; arrays and everything nested in them render
// inline, which keeps matrix-heavy reports readable.
class JsonWriter {
 public:
  explicit JsonWriter(int precision) : precision_(precision) {}

  void begin_object() {
    before_value();
    const bool compact = !stack_.empty() && (stack_.back().array || stack_.back().compact);
    stack_.push_back({false, compact, 0});
    out_ += '{';
  }

  void end_object() {
    const Level level = stack_.back();
    stack_.pop_back();
    if (!level.compact && level.count > 0) {
      out_ += '\n';
      append_indent();
    }
    out_ += '}';
  }

  void begin_array() {
    before_value();
    stack_.push_back({true, true, 0});
    out_ += '[';
  }

  void end_array() {
    stack_.pop_back();
    out_ += ']';
  }

  void key(std::string_view k) {
    Level& top = stack_.back();
    if (top.count++ > 0) out_ += ',';
    if (top.compact) {
      out_ += ' ';
    } else {
      out_ += '\n';
      append_indent();
    }
    append_string(k);
    out_ += ": ";
    pending_value_ = true;
  }

  void number(double v) {
    before_value();
    if (!std::isfinite(v)) {
      out_ += "null";
    } else {
      out_ += format_double(v, precision_);
    }
  }

  void integer(std::uint64_t v) {
    before_value();
    out_ += std::to_string(v);
  }

  void boolean(bool v) {
    before_value();
    out_ += v ? "true" : "false";
  }

  void string(std::string_view v) {
    before_value();
    append_string(v);
  }

  void null() {
    before_value();
    out_ += "null";
  }

  std::string take() { return std::move(out_); }

 private:
  struct Level {
    bool array;
    bool compact;
    int count;
  };

  void before_value() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty() && stack_.back().array) {
      if (stack_.back().count++ > 0) out_ += ", ";
    }
  }

  void append_indent() {
    out_.append(stack_.size() * 2, ' ');
  }

  void append_string(std::string_view v) {
    out_ += '"';
    for (char c : v) {
      switch (c) {
        case '"':
          out_ += "\\\"";
          break;
        case '\\':
          out_ += "\\\\";
          break;
        case '\n':
          out_ += "\\n";
          break;
        case '\r':
          out_ += "\\r";
          break;
        case '\t':
          out_ += "\\t";
          break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  int precision_;
  std::vector<Level> stack_;
  bool pending_value_ = false;
};

std::string csv_field(std::string_view v) {
  const bool needs_quotes = v.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void emit_complex(JsonWriter& w, matkit::Complex z) {
  w.begin_array();
  w.number(z.real());
  w.number(z.imag());
  w.end_array();
}

void emit_complex_matrix(JsonWriter& w, const matkit::ComplexMatrix& m) {
  w.begin_array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (std::size_t j = 0; j < m.cols(); ++j) emit_complex(w, m(i, j));
    w.end_array();
  }
  w.end_array();
}

void emit_real_matrix(JsonWriter& w, const matkit::RealMatrix& m) {
  w.begin_array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (std::size_t j = 0; j < m.cols(); ++j) w.number(m(i, j));
    w.end_array();
  }
  w.end_array();
}

void emit_hamiltonian_spec(JsonWriter& w, const HamiltonianSpec& spec) {
  switch (spec.kind) {
    case HamiltonianSpec::Kind::same_as_initial:
      w.string("same-as-initial");
      return;
    case HamiltonianSpec::Kind::matrix:
      w.begin_object();
      w.key("matrix");
      emit_complex_matrix(w, spec.matrix);
      w.end_object();
      return;
    case HamiltonianSpec::Kind::eigensystem:
      w.begin_object();
      w.key("eigenvalues");
      w.begin_array();
      for (double e : spec.eigenvalues) w.number(e);
      w.end_array();
      w.key("basis");
      emit_complex_matrix(w, spec.basis);
      w.end_object();
      return;
    case HamiltonianSpec::Kind::eigenvalues:
      w.begin_object();
      w.key("eigenvalues");
      w.begin_array();
      for (double e : spec.eigenvalues) w.number(e);
      w.end_array();
      w.end_object();
      return;
  }
}

void emit_evolution_spec(JsonWriter& w, const EvolutionSpec& spec) {
  switch (spec.kind) {
    case EvolutionSpec::Kind::identity:
      w.string("identity");
      return;
    case EvolutionSpec::Kind::hadamard:
      w.string("hadamard");
      return;
    case EvolutionSpec::Kind::euler:
      w.begin_object();
      w.key("euler");
      w.begin_object();
      w.key("theta");
      w.number(spec.theta);
      w.key("phi");
      w.number(spec.phi);
      w.key("lambda");
      w.number(spec.lambda);
      w.end_object();
      w.end_object();
      return;
    case EvolutionSpec::Kind::matrix:
      w.begin_object();
      w.key("matrix");
      emit_complex_matrix(w, spec.matrix);
      w.end_object();
      return;
    case EvolutionSpec::Kind::haar:
      w.begin_object();
      w.key("haar");
      w.begin_object();
      w.key("seed");
      w.integer(spec.seed);
      w.end_object();
      w.end_object();
      return;
  }
}

void emit_scenario(JsonWriter& w, const Scenario& s) {
  w.begin_object();
  if (s.description) {
    w.key("description");
    w.string(*s.description);
  }
  w.key("dim");
  w.integer(s.dim);
  w.key("beta");
  w.number(s.beta);
  w.key("h_initial");
  emit_hamiltonian_spec(w, s.h_initial);
  w.key("evolution");
  emit_evolution_spec(w, s.evolution);
  w.key("h_final");
  emit_hamiltonian_spec(w, s.h_final);
  w.key("conventions");
  w.begin_object();
  w.key("work_sign");
  w.string(work_sign_name(s.conventions.work_sign));
  w.key("delta_f");
  w.string(delta_f_name(s.conventions.delta_f));
  w.end_object();
  w.key("thermalized");
  w.boolean(s.thermalized);
  w.end_object();
}

std::vector<std::string> convention_notes(const Scenario& s) {
  std::vector<std::string> notes;
  notes.push_back(
      "delta_f convention 'paper' is fixed by the equality chain, exp(-beta*delta_f) = Z_i/Z_f; "
      "'standard' is F_f - F_i = -(1/beta) ln(Z_f/Z_i)");
  if (s.thermalized) {
    notes.push_back(
        "thermalized=true replaces the outcome marginal q_m with the canonical weights of the "
        "final Hamiltonian; the conditional matrix p(m|n) is unchanged");
  }
  return notes;
}

void emit_tool(JsonWriter& w) {
  w.key("tool");
  w.begin_object();
  w.key("name");
  w.string(kToolName);
  w.key("version");
  w.string(kToolVersion);
  w.end_object();
}

void emit_conventions(JsonWriter& w, const Scenario& s) {
  w.key("conventions");
  w.begin_object();
  w.key("work_sign");
  w.string(work_sign_name(s.conventions.work_sign));
  w.key("delta_f");
  w.string(delta_f_name(s.conventions.delta_f));
  w.key("notes");
  w.begin_array();
  for (const std::string& note : convention_notes(s)) w.string(note);
  w.end_array();
  w.end_object();
}

void emit_levels(JsonWriter& w, const qstate::Hamiltonian& h) {
  w.begin_object();
  w.key("energies");
  w.begin_array();
  for (const auto& level : h.levels()) w.number(level.energy);
  w.end_array();
  w.key("multiplicities");
  w.begin_array();
  for (const auto& level : h.levels()) w.integer(level.multiplicity);
  w.end_array();
  w.end_object();
}

// Shared scenario echo for the CSV formats: the normalized JSON on one line.
std::string scenario_echo_compact(const Scenario& s, int precision) {
  JsonWriter w(precision);
  w.begin_array();  // wrap so the object renders inline, then strip
  emit_scenario(w, s);
  w.end_array();
  std::string text = w.take();
  return text.substr(1, text.size() - 2);
}

class CsvWriter {
 public:
  explicit CsvWriter(int precision) : precision_(precision) { out_ += "key,value\n"; }

  void row(std::string_view key, std::string_view value) {
    out_ += csv_field(key);
    out_ += ',';
    out_ += csv_field(value);
    out_ += '\n';
  }

  void number(std::string_view key, double v) { row(key, format_double(v, precision_)); }
  void integer(std::string_view key, std::uint64_t v) { row(key, std::to_string(v)); }
  void boolean(std::string_view key, bool v) { row(key, v ? "true" : "false"); }

  void real_matrix(const std::string& key, const matkit::RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        number(key + "." + std::to_string(i) + "." + std::to_string(j), m(i, j));
      }
    }
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  int precision_;
};

}  // namespace

int report_precision() {
  const char* env = std::getenv("REPORT_PRECISION");
  if (env == nullptr) return 17;
  const std::string text(env);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::runtime_error("REPORT_PRECISION must be an integer between 6 and 17");
  }
  const int value = std::atoi(text.c_str());
  if (value < 6 || value > 17) {
    throw std::runtime_error("REPORT_PRECISION must be an integer between 6 and 17");
  }
  return value;
}

std::string format_double(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
  return buf;
}

std::string verify_report_json(const RealizedScenario& rs, const VerifyOutcome& v,
                               int precision) {
  JsonWriter w(precision);
  w.begin_object();
  w.key("scenario");
  emit_scenario(w, rs.scenario);

  w.key("eigen");
  w.begin_object();
  w.key("initial");
  emit_levels(w, rs.h_initial);
  w.key("final");
  emit_levels(w, rs.h_final);
  w.end_object();

  w.key("p_n");
  w.begin_array();
  for (double p : v.dist.initial.probabilities) w.number(p);
  w.end_array();

  w.key("conditional");
  emit_real_matrix(w, v.dist.conditional);
  w.key("joint");
  emit_real_matrix(w, v.dist.joint);

  w.key("q_m");
  w.begin_array();
  for (double q : v.dist.marginal) w.number(q);
  w.end_array();

  w.key("work");
  emit_real_matrix(w, v.dist.work);
  w.key("delta_f");
  w.number(v.dist.delta_f);

  w.key("i_tilde");
  w.begin_array();
  for (std::size_t n = 0; n < v.info.rows; ++n) {
    w.begin_array();
    for (std::size_t m = 0; m < v.info.cols; ++m) {
      if (v.info.defined(n, m)) {
        w.number(v.info.i_tilde(n, m));
      } else {
        w.null();
      }
    }
    w.end_array();
  }
  w.end_array();

  w.key("residuals");
  w.begin_object();
  w.key("convention");
  w.string("paper");
  w.key("matrix");
  w.begin_array();
  for (std::size_t n = 0; n < v.residual.info.rows; ++n) {
    w.begin_array();
    for (std::size_t m = 0; m < v.residual.info.cols; ++m) {
      if (v.residual.info.defined(n, m)) {
        w.number(v.residual.info.residual(n, m));
      } else {
        w.null();
      }
    }
    w.end_array();
  }
  w.end_array();
  w.key("max_abs");
  w.number(v.residual.info.max_abs_residual);
  w.key("weighted_sq");
  w.number(v.residual.info.weighted_sq_residual);
  w.end_object();

  w.key("eq1");
  w.begin_object();
  w.key("full_grid");
  w.number(v.averages.full_grid);
  w.key("support_restricted");
  w.number(v.averages.support_restricted);
  w.key("pass");
  w.boolean(v.eq1_pass);
  w.end_object();

  w.key("jarzynski");
  w.begin_object();
  w.key("value");
  w.number(v.averages.jarzynski);
  w.key("z_ratio");
  w.number(v.averages.z_ratio);
  w.key("expected");
  w.number(v.jarzynski_expected);
  w.key("pass");
  w.boolean(v.jarzynski_pass);
  w.end_object();

  w.key("thermal_chain");
  w.begin_object();
  w.key("terms");
  w.begin_array();
  w.number(v.chain.conditional_form);
  w.number(v.chain.log_form);
  w.number(v.chain.work_form);
  w.end_array();
  w.key("pass");
  w.boolean(v.chain_pass);
  w.end_object();

  emit_tool(w);
  emit_conventions(w, rs.scenario);
  w.end_object();
  std::string text = w.take();
  text += '\n';
  return text;
}

std::string verify_report_csv(const RealizedScenario& rs, const VerifyOutcome& v, int precision) {
  CsvWriter w(precision);
  w.row("scenario", scenario_echo_compact(rs.scenario, precision));
  for (std::size_t i = 0; i < rs.h_initial.levels().size(); ++i) {
    w.number("eigen.initial.energies." + std::to_string(i), rs.h_initial.levels()[i].energy);
  }
  for (std::size_t i = 0; i < rs.h_initial.levels().size(); ++i) {
    w.integer("eigen.initial.multiplicities." + std::to_string(i),
              rs.h_initial.levels()[i].multiplicity);
  }
  for (std::size_t i = 0; i < rs.h_final.levels().size(); ++i) {
    w.number("eigen.final.energies." + std::to_string(i), rs.h_final.levels()[i].energy);
  }
  for (std::size_t i = 0; i < rs.h_final.levels().size(); ++i) {
    w.integer("eigen.final.multiplicities." + std::to_string(i),
              rs.h_final.levels()[i].multiplicity);
  }
  for (std::size_t i = 0; i < v.dist.initial.probabilities.size(); ++i) {
    w.number("p_n." + std::to_string(i), v.dist.initial.probabilities[i]);
  }
  w.real_matrix("conditional", v.dist.conditional);
  w.real_matrix("joint", v.dist.joint);
  for (std::size_t i = 0; i < v.dist.marginal.size(); ++i) {
    w.number("q_m." + std::to_string(i), v.dist.marginal[i]);
  }
  w.real_matrix("work", v.dist.work);
  w.number("delta_f", v.dist.delta_f);
  for (std::size_t n = 0; n < v.info.rows; ++n) {
    for (std::size_t m = 0; m < v.info.cols; ++m) {
      const std::string key = "i_tilde." + std::to_string(n) + "." + std::to_string(m);
      if (v.info.defined(n, m)) {
        w.number(key, v.info.i_tilde(n, m));
      } else {
        w.row(key, "undef");
      }
    }
  }
  w.row("residuals.convention", "paper");
  for (std::size_t n = 0; n < v.residual.info.rows; ++n) {
    for (std::size_t m = 0; m < v.residual.info.cols; ++m) {
      const std::string key = "residuals.matrix." + std::to_string(n) + "." + std::to_string(m);
      if (v.residual.info.defined(n, m)) {
        w.number(key, v.residual.info.residual(n, m));
      } else {
        w.row(key, "undef");
      }
    }
  }
  w.number("residuals.max_abs", v.residual.info.max_abs_residual);
  w.number("residuals.weighted_sq", v.residual.info.weighted_sq_residual);
  w.number("eq1.full_grid", v.averages.full_grid);
  w.number("eq1.support_restricted", v.averages.support_restricted);
  w.boolean("eq1.pass", v.eq1_pass);
  w.number("jarzynski.value", v.averages.jarzynski);
  w.number("jarzynski.z_ratio", v.averages.z_ratio);
  w.number("jarzynski.expected", v.jarzynski_expected);
  w.boolean("jarzynski.pass", v.jarzynski_pass);
  w.number("thermal_chain.0", v.chain.conditional_form);
  w.number("thermal_chain.1", v.chain.log_form);
  w.number("thermal_chain.2", v.chain.work_form);
  w.boolean("thermal_chain.pass", v.chain_pass);
  w.row("tool.name", kToolName);
  w.row("tool.version", kToolVersion);
  w.row("conventions.work_sign", work_sign_name(rs.scenario.conventions.work_sign));
  w.row("conventions.delta_f", delta_f_name(rs.scenario.conventions.delta_f));
  const auto notes = convention_notes(rs.scenario);
  for (std::size_t i = 0; i < notes.size(); ++i) {
    w.row("conventions.notes." + std::to_string(i), notes[i]);
  }
  return w.take();
}

std::string sample_report_json(const RealizedScenario& rs, const sampler::EstimatorResult& est,
                               std::uint64_t seed, int precision) {
  JsonWriter w(precision);
  w.begin_object();
  w.key("scenario");
  emit_scenario(w, rs.scenario);
  w.key("sampling");
  w.begin_object();
  w.key("seed");
  w.integer(seed);
  w.key("shots");
  w.integer(est.shots);
  w.end_object();
  w.key("estimates");
  w.begin_array();
  w.begin_object();
  w.key("observable");
  w.string(est.observable);
  w.key("shots");
  w.integer(est.shots);
  w.key("mean");
  w.number(est.mean);
  w.key("sample_std");
  w.number(est.sample_std);
  w.key("standard_error");
  w.number(est.standard_error);
  w.key("exact");
  w.number(est.exact);
  w.key("z_score");
  w.number(est.z_score);
  w.end_object();
  w.end_array();
  emit_tool(w);
  emit_conventions(w, rs.scenario);
  w.end_object();
  std::string text = w.take();
  text += '\n';
  return text;
}

std::string sample_report_csv(const RealizedScenario& rs, const sampler::EstimatorResult& est,
                              std::uint64_t seed, int precision) {
  (void)rs;
  std::string out = "observable,shots,seed,mean,sample_std,standard_error,exact,z_score\n";
  out += csv_field(est.observable);
  out += ',' + std::to_string(est.shots);
  out += ',' + std::to_string(seed);
  out += ',' + format_double(est.mean, precision);
  out += ',' + format_double(est.sample_std, precision);
  out += ',' + format_double(est.standard_error, precision);
  out += ',' + format_double(est.exact, precision);
  out += ',' + format_double(est.z_score, precision);
  out += '\n';
  return out;
}

std::string search_report_json(const RealizedScenario& rs, const protosearch::SearchBudget& budget,
                               const protosearch::SearchResult& result, int precision) {
  JsonWriter w(precision);
  w.begin_object();
  w.key("scenario");
  emit_scenario(w, rs.scenario);
  w.key("search");
  w.begin_object();
  w.key("starts");
  w.integer(result.starts);
  w.key("max_iterations");
  w.integer(budget.max_iterations);
  w.key("seed");
  w.integer(budget.seed);
  w.key("objective");
  w.number(result.objective_value);
  w.key("max_abs_residual");
  w.number(result.max_abs_residual);
  w.key("converged");
  w.boolean(result.converged);
  w.key("iterations_used");
  w.integer(result.iterations_used);
  w.key("best_params");
  w.begin_array();
  for (double p : result.best_params) w.number(p);
  w.end_array();
  w.key("best_unitary");
  emit_complex_matrix(w, result.best_unitary);
  w.end_object();
  emit_tool(w);
  emit_conventions(w, rs.scenario);
  w.end_object();
  std::string text = w.take();
  text += '\n';
  return text;
}

std::string search_report_csv(const RealizedScenario& rs, const protosearch::SearchBudget& budget,
                              const protosearch::SearchResult& result, int precision) {
  CsvWriter w(precision);
  w.row("scenario", scenario_echo_compact(rs.scenario, precision));
  w.integer("search.starts", result.starts);
  w.integer("search.max_iterations", budget.max_iterations);
  w.integer("search.seed", budget.seed);
  w.number("search.objective", result.objective_value);
  w.number("search.max_abs_residual", result.max_abs_residual);
  w.boolean("search.converged", result.converged);
  w.integer("search.iterations_used", result.iterations_used);
  for (std::size_t i = 0; i < result.best_params.size(); ++i) {
    w.number("search.best_params." + std::to_string(i), result.best_params[i]);
  }
  for (std::size_t i = 0; i < result.best_unitary.rows(); ++i) {
    for (std::size_t j = 0; j < result.best_unitary.cols(); ++j) {
      const std::string key =
          "search.best_unitary." + std::to_string(i) + "." + std::to_string(j);
      w.number(key + ".re", result.best_unitary(i, j).real());
      w.number(key + ".im", result.best_unitary(i, j).imag());
    }
  }
  w.row("tool.name", kToolName);
  w.row("tool.version", kToolVersion);
  w.row("conventions.work_sign", work_sign_name(rs.scenario.conventions.work_sign));
  w.row("conventions.delta_f", delta_f_name(rs.scenario.conventions.delta_f));
  return w.take();
}

std::string sweep_report_csv(const std::vector<SweepRow>& rows, int precision) {
  std::string out = "beta,eq1_full_grid,eq1_support_restricted,jarzynski,max_abs_residual\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.beta, precision);
    out += ',' + format_double(r.eq1_full_grid, precision);
    out += ',' + format_double(r.eq1_support_restricted, precision);
    out += ',' + format_double(r.jarzynski, precision);
    out += ',' + format_double(r.max_abs_residual, precision);
    out += '\n';
  }
  return out;
}

std::string sweep_report_json(const RealizedScenario& rs, const std::vector<SweepRow>& rows,
                              int precision) {
  JsonWriter w(precision);
  w.begin_object();
  w.key("scenario");
  emit_scenario(w, rs.scenario);
  w.key("rows");
  w.begin_array();
  for (const SweepRow& r : rows) {
    w.begin_object();
    w.key("beta");
    w.number(r.beta);
    w.key("eq1_full_grid");
    w.number(r.eq1_full_grid);
    w.key("eq1_support_restricted");
    w.number(r.eq1_support_restricted);
    w.key("jarzynski");
    w.number(r.jarzynski);
    w.key("max_abs_residual");
    w.number(r.max_abs_residual);
    w.end_object();
  }
  w.end_array();
  emit_tool(w);
  emit_conventions(w, rs.scenario);
  w.end_object();
  std::string text = w.take();
  text += '\n';
  return text;
}

}  // namespace tpmwork::cli
