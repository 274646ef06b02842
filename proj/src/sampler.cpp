#include "tpmwork/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "tpmwork/infotherm.hpp"

namespace tpmwork::sampler {

namespace {

std::vector<double> cumulative(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  double run = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    run += weights[i];
    cdf[i] = run;
  }
  cdf.back() = 1.0;  // pad the final bin so no draw can fall off the end
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (u < cdf[i]) return i;
  }
  return cdf.size() - 1;
}

struct Cdfs {
  std::vector<double> level;
  std::vector<std::vector<double>> rows;
};

Cdfs build_cdfs(const tpm::TpmDistribution& t) {
  Cdfs cdfs;
  cdfs.level = cumulative(t.initial.probabilities);
  cdfs.rows.reserve(t.conditional.rows());
  for (std::size_t n = 0; n < t.conditional.rows(); ++n) {
    std::vector<double> row(t.conditional.cols());
    for (std::size_t m = 0; m < t.conditional.cols(); ++m) row[m] = t.conditional(n, m);
    cdfs.rows.push_back(cumulative(row));
  }
  return cdfs;
}

// Per-pair observable values and the matching exact expectation.
struct ObservableTable {
  matkit::RealMatrix values;
  std::vector<std::uint8_t> valid;
  double exact = 0.0;
};

ObservableTable build_table(const tpm::TpmDistribution& t, Observable obs) {
  const std::size_t rows = t.joint.rows();
  const std::size_t cols = t.joint.cols();
  ObservableTable table;
  table.values = matkit::RealMatrix(rows, cols);
  table.valid.assign(rows * cols, 1);

  switch (obs) {
    case Observable::exp_neg_i_tilde: {
      const infotherm::InfoMatrix info = infotherm::i_tilde_matrix(t);
      for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t m = 0; m < cols; ++m) {
          if (info.defined(n, m)) {
            const double v = std::exp(-info.i_tilde(n, m));
            table.values(n, m) = v;
            table.exact += t.joint(n, m) * v;
          } else {
            table.valid[n * cols + m] = 0;
          }
        }
      }
      break;
    }
    case Observable::exp_jarzynski: {
      const bool paper = t.conventions.work_sign == tpm::WorkSign::paper;
      const double delta_f_paper =
          t.conventions.delta_f == qstate::DeltaFConvention::paper ? t.delta_f : -t.delta_f;
      for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t m = 0; m < cols; ++m) {
          const double exponent = paper ? t.beta * (t.work(n, m) - delta_f_paper)
                                        : -t.beta * t.work(n, m);
          table.values(n, m) = std::exp(exponent);
        }
      }
      table.exact = infotherm::jarzynski_average(t);
      break;
    }
    case Observable::work_mean: {
      for (std::size_t n = 0; n < rows; ++n) {
        for (std::size_t m = 0; m < cols; ++m) {
          table.values(n, m) = t.work(n, m);
          table.exact += t.joint(n, m) * t.work(n, m);
        }
      }
      break;
    }
  }
  return table;
}

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise merge; applied in stream-index order.
  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }
};

Moments run_stream(const tpm::TpmDistribution& t, const Cdfs& cdfs,
                   const ObservableTable& table, std::size_t shots, RngState& rng) {
  const std::size_t cols = t.joint.cols();
  Moments moments;
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const std::size_t n = draw(cdfs.level, rng.uniform01());
    const std::size_t m = draw(cdfs.rows[n], rng.uniform01());
    if (!table.valid[n * cols + m]) {
      throw UndefinedObservableError("estimate: sampled pair (" + std::to_string(n) + ", " +
                                     std::to_string(m) + ") has no defined observable value");
    }
    moments.add(table.values(n, m));
  }
  return moments;
}

EstimatorResult finish(Observable obs, const Moments& moments, double exact) {
  EstimatorResult result;
  result.observable = observable_name(obs);
  result.shots = moments.count;
  result.mean = moments.mean;
  result.sample_std =
      moments.count > 1 ? std::sqrt(moments.m2 / static_cast<double>(moments.count - 1)) : 0.0;
  result.standard_error =
      result.sample_std / std::sqrt(static_cast<double>(std::max<std::size_t>(moments.count, 1)));
  result.exact = exact;
  result.z_score =
      result.standard_error > 0.0 ? (result.mean - result.exact) / result.standard_error : 0.0;
  return result;
}

}  // namespace

const char* observable_name(Observable obs) {
  switch (obs) {
    case Observable::exp_neg_i_tilde:
      return "exp_neg_i_tilde";
    case Observable::exp_jarzynski:
      return "exp_jarzynski";
    case Observable::work_mean:
      return "work_mean";
  }
  return "unknown";
}

std::vector<OutcomePair> sample_tpm(const tpm::TpmDistribution& t, std::size_t shots,
                                    RngState& rng) {
  const Cdfs cdfs = build_cdfs(t);
  std::vector<OutcomePair> pairs;
  pairs.reserve(shots);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const std::size_t n = draw(cdfs.level, rng.uniform01());
    const std::size_t m = draw(cdfs.rows[n], rng.uniform01());
    pairs.push_back({n, m});
  }
  return pairs;
}

EstimatorResult estimate(const tpm::TpmDistribution& t, Observable obs, std::size_t shots,
                         RngState& rng) {
  const Cdfs cdfs = build_cdfs(t);
  const ObservableTable table = build_table(t, obs);
  const Moments moments = run_stream(t, cdfs, table, shots, rng);
  return finish(obs, moments, table.exact);
}

EstimatorResult estimate_streams(const tpm::TpmDistribution& t, Observable obs,
                                 std::size_t shots, std::uint64_t seed, std::size_t n_streams) {
  if (n_streams == 0) n_streams = 1;
  const Cdfs cdfs = build_cdfs(t);
  const ObservableTable table = build_table(t, obs);

  std::vector<Moments> partial(n_streams);
  std::vector<std::exception_ptr> failures(n_streams);
  std::vector<std::thread> workers;
  workers.reserve(n_streams);
  const std::size_t base = shots / n_streams;
  const std::size_t extra = shots % n_streams;
  for (std::size_t k = 0; k < n_streams; ++k) {
    const std::size_t span = base + (k < extra ? 1 : 0);
    workers.emplace_back([&, k, span]() {
      try {
        RngState stream_rng(rng::stream_seed(seed, k));
        partial[k] = run_stream(t, cdfs, table, span, stream_rng);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (std::size_t k = 0; k < n_streams; ++k) {
    if (failures[k]) std::rethrow_exception(failures[k]);
  }

  Moments merged;
  for (std::size_t k = 0; k < n_streams; ++k) merged.merge(partial[k]);
  return finish(obs, merged, table.exact);
}

}  // namespace tpmwork::sampler
