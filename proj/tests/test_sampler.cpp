#include <doctest.h>

#include <cmath>

#include "tpmwork/infotherm.hpp"
#include "tpmwork/sampler.hpp"

using namespace tpmwork;
using matkit::Complex;
using matkit::ComplexMatrix;
using qstate::Hamiltonian;
using sampler::Observable;
using tpm::Conventions;
using tpm::Evolution;

namespace {

Hamiltonian qubit01() { return Hamiltonian::from_eigenvalues({0.0, 1.0}); }

Evolution hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(2, 2);
  h(0, 0) = h(0, 1) = h(1, 0) = Complex(s, 0.0);
  h(1, 1) = Complex(-s, 0.0);
  return Evolution::from_matrix(std::move(h));
}

tpm::TpmDistribution hadamard_scenario() {
  return tpm::build_tpm(qubit01(), 1.0, hadamard(), qubit01(), Conventions{}, false);
}

tpm::TpmDistribution identity_scenario() {
  return tpm::build_tpm(qubit01(), 1.0, Evolution::identity(2), qubit01(), Conventions{}, false);
}

tpm::TpmDistribution qutrit_scenario() {
  const Hamiltonian hi = Hamiltonian::from_eigenvalues({-1.0, 0.2, 1.5});
  const Hamiltonian hf = Hamiltonian::from_eigenvalues({-0.5, 0.0, 2.0});
  return tpm::build_tpm(hi, 0.7, Evolution::haar_random(3, 424242), hf, Conventions{}, false);
}

}  // namespace

TEST_CASE("a deterministic level distribution pins the first outcome") {
  tpm::TpmDistribution t = hadamard_scenario();
  t.initial.probabilities = {1.0, 0.0};  // doctored degenerate distribution
  sampler::RngState rng(5);
  for (const auto& pair : sampler::sample_tpm(t, 500, rng)) {
    CHECK(pair.n == 0);
  }
}

TEST_CASE("identity scenario only ever produces diagonal pairs") {
  const tpm::TpmDistribution t = identity_scenario();
  sampler::RngState rng(17);
  for (const auto& pair : sampler::sample_tpm(t, 2000, rng)) {
    CHECK(pair.n == pair.m);
  }
}

TEST_CASE("empirical joint frequencies satisfy the binomial error bound") {
  const tpm::TpmDistribution t = hadamard_scenario();
  const std::size_t shots = 1000000;
  sampler::RngState rng(99);
  const auto pairs = sampler::sample_tpm(t, shots, rng);
  double counts[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (const auto& pair : pairs) counts[pair.n][pair.m] += 1.0;
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t m = 0; m < 2; ++m) {
      const double p = t.joint(n, m);
      const double bound = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
      CHECK(std::abs(counts[n][m] / static_cast<double>(shots) - p) < bound);
    }
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const tpm::TpmDistribution t = qutrit_scenario();
  sampler::RngState a(31415), b(31415);
  const auto pairs_a = sampler::sample_tpm(t, 5000, a);
  const auto pairs_b = sampler::sample_tpm(t, 5000, b);
  REQUIRE(pairs_a.size() == pairs_b.size());
  for (std::size_t i = 0; i < pairs_a.size(); ++i) {
    CHECK(pairs_a[i].n == pairs_b[i].n);
    CHECK(pairs_a[i].m == pairs_b[i].m);
  }
}

TEST_CASE("empirical total-variation distance shrinks with shot count") {
  const tpm::TpmDistribution t = qutrit_scenario();
  const std::size_t shots = 10000;
  const double d = 3.0;
  const double bound = 5.0 * std::sqrt(d * d / static_cast<double>(shots));
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    sampler::RngState rng(seed);
    const auto pairs = sampler::sample_tpm(t, shots, rng);
    matkit::RealMatrix counts(3, 3);
    for (const auto& pair : pairs) counts(pair.n, pair.m) += 1.0;
    double tv = 0.0;
    for (std::size_t n = 0; n < 3; ++n) {
      for (std::size_t m = 0; m < 3; ++m) {
        tv += std::abs(counts(n, m) / static_cast<double>(shots) - t.joint(n, m));
      }
    }
    tv *= 0.5;
    if (tv < bound) ++passes;
  }
  CHECK(passes >= 19);
}

TEST_CASE("constant observable: exp_neg_i_tilde on the Hadamard scenario") {
  const tpm::TpmDistribution t = hadamard_scenario();
  sampler::RngState rng(12);
  const sampler::EstimatorResult est =
      sampler::estimate(t, Observable::exp_neg_i_tilde, 20000, rng);
  CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.sample_std == 0.0);
  CHECK(est.standard_error == 0.0);
  CHECK(est.z_score == 0.0);
  CHECK(std::abs(est.mean - est.exact) <= 1e-12);
}

TEST_CASE("work_mean on the identity scenario is exactly zero") {
  const tpm::TpmDistribution t = identity_scenario();
  sampler::RngState rng(3);
  const sampler::EstimatorResult est = sampler::estimate(t, Observable::work_mean, 5000, rng);
  CHECK(est.mean == 0.0);
  CHECK(est.exact == 0.0);
}

TEST_CASE("exp_jarzynski estimate is CLT-consistent with the exact value") {
  const tpm::TpmDistribution t = hadamard_scenario();
  sampler::RngState rng(2718);
  const sampler::EstimatorResult est =
      sampler::estimate(t, Observable::exp_jarzynski, 1000000, rng);
  CHECK(est.exact == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(est.z_score) < 4.0);
}

TEST_CASE("estimator consistency across seeds on the reference scenarios") {
  const tpm::TpmDistribution scenarios[] = {hadamard_scenario(), qutrit_scenario()};
  const Observable observables[] = {Observable::exp_neg_i_tilde, Observable::exp_jarzynski,
                                    Observable::work_mean};
  for (const auto& t : scenarios) {
    for (Observable obs : observables) {
      int passes = 0;
      for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        sampler::RngState rng(seed);
        const sampler::EstimatorResult est = sampler::estimate(t, obs, 100000, rng);
        // the tiny absolute guard covers constant observables where SE = 0
        if (std::abs(est.mean - est.exact) <
            4.0 * est.standard_error + 1e-12 * std::max(1.0, std::abs(est.exact))) {
          ++passes;
        }
      }
      CHECK(passes >= 95);
    }
  }
}

TEST_CASE("estimates are deterministic and streams merge in fixed order") {
  const tpm::TpmDistribution t = qutrit_scenario();

  sampler::RngState a(606), b(606);
  const sampler::EstimatorResult ea = sampler::estimate(t, Observable::exp_jarzynski, 40000, a);
  const sampler::EstimatorResult eb = sampler::estimate(t, Observable::exp_jarzynski, 40000, b);
  CHECK(ea.mean == eb.mean);
  CHECK(ea.sample_std == eb.sample_std);

  const sampler::EstimatorResult s1 =
      sampler::estimate_streams(t, Observable::exp_jarzynski, 40001, 606, 4);
  const sampler::EstimatorResult s2 =
      sampler::estimate_streams(t, Observable::exp_jarzynski, 40001, 606, 4);
  CHECK(s1.mean == s2.mean);
  CHECK(s1.sample_std == s2.sample_std);
  CHECK(s1.shots == 40001);
  // single stream reduces to the plain estimator with the same seed
  sampler::RngState c(606);
  const sampler::EstimatorResult plain =
      sampler::estimate(t, Observable::exp_jarzynski, 40000, c);
  const sampler::EstimatorResult one =
      sampler::estimate_streams(t, Observable::exp_jarzynski, 40000, 606, 1);
  CHECK(one.mean == plain.mean);
  CHECK(std::abs(s1.mean - plain.mean) < 4.0 * plain.standard_error + 4.0 * s1.standard_error);
}

TEST_CASE("sampled pairs with undefined observable values raise the dedicated error") {
  tpm::TpmDistribution t = hadamard_scenario();
  // doctored marginal: q_0 = 0 makes I~ undefined in column 0 while the
  // conditional still sends weight there
  t.thermalized = true;
  t.marginal = {0.0, 1.0};
  sampler::RngState rng(1);
  CHECK_THROWS_AS(sampler::estimate(t, Observable::exp_neg_i_tilde, 100, rng),
                  sampler::UndefinedObservableError);
}
