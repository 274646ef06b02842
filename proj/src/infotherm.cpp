#include "tpmwork/infotherm.hpp"

#include <cmath>

namespace tpmwork::infotherm {

namespace {

// Work and delta_f values of t re-expressed under `wanted`, by exact negation
// where the stored convention differs.
struct ConvertedValues {
  matkit::RealMatrix work;
  double delta_f;
};

ConvertedValues convert(const tpm::TpmDistribution& t, tpm::Conventions wanted) {
  ConvertedValues out;
  out.work = t.work;
  if (wanted.work_sign != t.conventions.work_sign) {
    for (std::size_t n = 0; n < out.work.rows(); ++n) {
      for (std::size_t m = 0; m < out.work.cols(); ++m) out.work(n, m) = -out.work(n, m);
    }
  }
  out.delta_f = wanted.delta_f != t.conventions.delta_f ? -t.delta_f : t.delta_f;
  return out;
}

InfoMatrix info_matrix_under(const tpm::TpmDistribution& t, tpm::Conventions conventions) {
  const std::size_t rows = t.joint.rows();
  const std::size_t cols = t.joint.cols();
  const ConvertedValues values = convert(t, conventions);

  InfoMatrix info;
  info.rows = rows;
  info.cols = cols;
  info.i_tilde = matkit::RealMatrix(rows, cols);
  info.target = matkit::RealMatrix(rows, cols);
  info.residual = matkit::RealMatrix(rows, cols);
  info.defined_mask.assign(rows * cols, 0);

  for (std::size_t n = 0; n < rows; ++n) {
    for (std::size_t m = 0; m < cols; ++m) {
      const double target = -t.beta * (values.work(n, m) - values.delta_f);
      info.target(n, m) = target;
      const double j = t.joint(n, m);
      const double q = t.marginal[m];
      if (j > 0.0 && q > 0.0) {
        info.defined_mask[n * cols + m] = 1;
        const double i_tilde = std::log(t.conditional(n, m)) - std::log(q);
        info.i_tilde(n, m) = i_tilde;
        const double r = i_tilde - target;
        info.residual(n, m) = r;
        if (std::abs(r) > info.max_abs_residual) info.max_abs_residual = std::abs(r);
        info.weighted_sq_residual += j * r * r;
      } else {
        info.undefined_mass += j;
      }
    }
  }
  return info;
}

}  // namespace

InfoMatrix i_tilde_matrix(const tpm::TpmDistribution& t) {
  return info_matrix_under(t, t.conventions);
}

AverageReport exp_average(const tpm::TpmDistribution& t) {
  const std::size_t rows = t.joint.rows();
  const std::size_t cols = t.joint.cols();
  double full_grid = 0.0;
  double support_restricted = 0.0;
  for (std::size_t n = 0; n < rows; ++n) {
    const double p_n = t.initial.probabilities[n];
    for (std::size_t m = 0; m < cols; ++m) {
      // p_nm e^{-I~} = p_n q_m; the identity extends continuously over
      // zero-probability pairs, which is what makes the full grid exact.
      const double term = p_n * t.marginal[m];
      full_grid += term;
      if (t.joint(n, m) > 0.0) support_restricted += term;
    }
  }
  const double z_ratio = std::exp(t.final_thermal.log_partition - t.initial.log_partition);
  return AverageReport{full_grid, support_restricted, jarzynski_average(t), z_ratio};
}

double jarzynski_average(const tpm::TpmDistribution& t) {
  const bool paper = t.conventions.work_sign == tpm::WorkSign::paper;
  const ConvertedValues values =
      convert(t, tpm::Conventions{t.conventions.work_sign,
                                  paper ? qstate::DeltaFConvention::paper
                                        : qstate::DeltaFConvention::standard});
  double sum = 0.0;
  for (std::size_t n = 0; n < t.joint.rows(); ++n) {
    for (std::size_t m = 0; m < t.joint.cols(); ++m) {
      const double j = t.joint(n, m);
      if (j <= 0.0) continue;
      // Exponents are combined in log space so large beta*W cannot overflow
      // before the compensating joint weight is applied.
      const double exponent = paper ? t.beta * (values.work(n, m) - values.delta_f)
                                    : -t.beta * values.work(n, m);
      sum += std::exp(std::log(j) + exponent);
    }
  }
  return sum;
}

ResidualReport residuals(const tpm::TpmDistribution& t) {
  return residuals(t, tpm::Conventions{tpm::WorkSign::paper, qstate::DeltaFConvention::paper});
}

ResidualReport residuals(const tpm::TpmDistribution& t, tpm::Conventions override_conventions) {
  ResidualReport report;
  report.info = info_matrix_under(t, override_conventions);
  for (std::size_t n = 0; n < report.info.rows; ++n) {
    for (std::size_t m = 0; m < report.info.cols; ++m) {
      const double j = t.joint(n, m);
      if (j <= 0.0 || !report.info.defined(n, m)) continue;
      report.i_tilde_distribution.push_back({report.info.i_tilde(n, m), j});
      report.target_distribution.push_back({report.info.target(n, m), j});
    }
  }
  return report;
}

}  // namespace tpmwork::infotherm
