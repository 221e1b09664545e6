#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hamlb/combinatorics.hpp"
#include "hamlb/common.hpp"
#include "hamlb/game.hpp"
#include "hamlb/local_case.hpp"

using namespace hamlb;

namespace {

LocalInstance make(int n, int k, int c, double beta = 1.0, std::uint64_t seed = 0,
                   SupportDegree degree = SupportDegree::exactly_k) {
  LocalParams p;
  p.n = n;
  p.k = k;
  p.c = c;
  p.beta = beta;
  p.seed = seed;
  p.degree = degree;
  return sample_local_instance(p);
}

LocalInstance with_alpha(int n, const CoeffVector& alpha) {
  LocalInstance inst = make(n, 3, 2);
  inst.alpha = alpha;
  inst.g = build_diagonal(alpha);
  return inst;
}

CVector random_state(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

}  // namespace

TEST(LocalParams, Constraints) {
  LocalParams p;
  p.c = 1;
  EXPECT_THROW(p.validate(), PreconditionError);
  p.c = 2;
  p.k = 2;
  EXPECT_THROW(p.validate(), PreconditionError);
  p.k = 7;
  EXPECT_THROW(p.validate(), PreconditionError);
  p.k = 6;
  p.n = 5;
  EXPECT_THROW(p.validate(), PreconditionError);
  p.n = 10;
  EXPECT_NO_THROW(p.validate());
}

TEST(LocalInstanceSampler, VarianceAndSupport) {
  EXPECT_DOUBLE_EQ(local_sigma2(16, 3), 1.0 / (30.0 * std::log(16.0)));
  const LocalInstance inst = make(8, 3, 2);
  EXPECT_EQ(inst.alpha.size(), 56u);
  EXPECT_EQ(inst.alpha.max_locality(), 3);
  for (const auto& [p, a] : inst.alpha.terms()) EXPECT_EQ(p.locality(), 3);
  const LocalInstance wide = make(8, 3, 2, 1.0, 0, SupportDegree::up_to_k);
  EXPECT_EQ(wide.alpha.size(), 1u + 8u + 28u + 56u);
}

TEST(LocalInstanceSampler, DeterministicAndGaussian) {
  const LocalInstance a = make(12, 4, 2, 1.0, 9);
  const LocalInstance b = make(12, 4, 2, 1.0, 9);
  EXPECT_EQ(a.alpha.terms(), b.alpha.terms());
  double sum = 0.0, sum2 = 0.0;
  for (const auto& [p, v] : a.alpha.terms()) {
    sum += v;
    sum2 += v * v;
  }
  const double count = static_cast<double>(a.alpha.size());
  EXPECT_NEAR(sum2 / count, a.sigma2, 0.15 * a.sigma2);
  EXPECT_NEAR(sum / count, 0.0, 4.0 * std::sqrt(a.sigma2 / count));
}

TEST(SpikeSampler, UniformOverPairs) {
  std::map<std::uint32_t, int> counts;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const PauliString p = sample_spike(6, 2, SpikeMode::uniform_exactly_c, static_cast<std::uint64_t>(s));
    EXPECT_EQ(p.z_mask(), 0u);
    ++counts[p.x_mask()];
  }
  ASSERT_EQ(counts.size(), 15u);
  double chi2 = 0.0;
  const double expected = draws / 15.0;
  for (const auto& [m, c] : counts) {
    EXPECT_EQ(popcount(m), 2);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 36.12);  // chi-square, 14 dof, p = 0.001
}

TEST(SpikeSampler, UpToCIsUniformOverNonemptySubsets) {
  std::map<std::uint32_t, int> counts;
  const int draws = 60000;
  for (int s = 0; s < draws; ++s) {
    ++counts[sample_spike(5, 2, SpikeMode::uniform_up_to_c, static_cast<std::uint64_t>(s)).x_mask()];
  }
  ASSERT_EQ(counts.size(), 15u);  // 5 singletons and 10 pairs
  double chi2 = 0.0;
  const double expected = draws / 15.0;
  for (const auto& [m, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 36.12);
  EXPECT_EQ(spike_family(5, 2, SpikeMode::uniform_up_to_c).size(), 15u);
}

TEST(SpikeSampler, FullSubsetAndLocality) {
  EXPECT_EQ(sample_spike(7, 7, SpikeMode::uniform_exactly_c, 3).x_mask(), 0x7fu);
  for (std::uint64_t s = 0; s < 200; ++s) {
    EXPECT_LE(sample_spike(9, 3, SpikeMode::uniform_up_to_c, s).locality(), 3);
  }
}

TEST(Goodness, ZeroAndIdentityOnlyCoefficients) {
  const int n = 8;
  CoeffVector zero(n);
  const GoodnessReport a = goodness_check(with_alpha(n, zero), 0.1);
  for (double f : a.per_x_fraction) EXPECT_EQ(f, 1.0);
  CoeffVector id(n);
  id.set(PauliString::identity(n), 3.7);
  const GoodnessReport b = goodness_check(with_alpha(n, id), 0.1);
  EXPECT_EQ(b.max_fraction, 1.0);
  EXPECT_EQ(b.mean_fraction, 1.0);
}

TEST(Goodness, ExhaustiveCountByHand) {
  const LocalInstance inst = make(8, 3, 2, 1.0, 4);
  const GoodnessReport rep = goodness_check(inst, 0.1);
  EXPECT_EQ(rep.num_spikes, 28u);
  EXPECT_DOUBLE_EQ(rep.threshold, std::pow(8.0, 0.1));
  for (std::uint32_t x : {0u, 17u, 255u}) {
    int count = 0;
    for (std::uint32_t t = 0; t < 256; ++t) {
      if (popcount(t) == 2 && std::abs(inst.g.g[x] - inst.g.g[x ^ t]) <= rep.threshold) ++count;
    }
    EXPECT_EQ(rep.per_x_count[x], static_cast<std::uint32_t>(count));
  }
  for (double f : rep.per_x_fraction) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(Covariance, HandExampleAndDiagonal) {
  // T_1 = {1, 2}, T_2 = {2, 3} (bits 0, 1 and 1, 2).
  const CovarianceInstance cov = covariance_bruteforce(6, 3, 2, {0b011u, 0b110u});
  EXPECT_EQ(cov(0, 1), 6);
  EXPECT_EQ(cov(1, 0), 6);
  int diag = 0;
  for (std::uint32_t s : subsets_of_size(6, 3)) diag += popcount(s & 0b011u) & 1;
  EXPECT_EQ(cov(0, 0), diag);
}

TEST(Covariance, MatchesZCount) {
  const int n = 10, k = 4, c = 2;
  const auto family = subsets_of_size(n, c);
  const CovarianceInstance cov = covariance_bruteforce(n, k, c, family);
  const BinomTable b(n);
  for (std::size_t i = 0; i < cov.d(); ++i) {
    for (std::size_t j = 0; j < cov.d(); ++j) {
      const int t = popcount(family[i] & family[j]);
      EXPECT_EQ(BigInt(cov(i, j)), z_count({n, k, c, t}, ZMethod::partition_sum, b));
    }
  }
}

TEST(Covariance, Guards) {
  EXPECT_THROW(covariance_bruteforce(21, 3, 2, {3u}), DimensionGuardError);
  EXPECT_THROW(covariance_bruteforce(10, 3, 2, {7u}), PreconditionError);
}

TEST(CovariancePsd, ScalarAndFloor) {
  const CovarianceInstance one = covariance_bruteforce(8, 3, 2, {0b11u});
  const PsdCheck s = covariance_psd_check(one);
  EXPECT_DOUBLE_EQ(s.min_eigenvalue, static_cast<double>(one(0, 0)));
  EXPECT_DOUBLE_EQ(s.floor, 4.0 * 4.0);  // 4 * C(4, 1)
  const auto family = choose_spike_family(12, 2, 20, 5);
  ASSERT_EQ(family.size(), 20u);
  const PsdCheck p = covariance_psd_check(covariance_bruteforce(12, 3, 2, family));
  EXPECT_DOUBLE_EQ(p.floor, 32.0);
  EXPECT_TRUE(p.pass) << p.min_eigenvalue;
  const PsdCheck full = covariance_psd_check(covariance_bruteforce(10, 3, 2, subsets_of_size(10, 2)));
  EXPECT_TRUE(full.pass) << full.min_eigenvalue;
}

TEST(SpikeFamily, FullEnumerationWhenSmall) {
  EXPECT_EQ(choose_spike_family(10, 2, 128, 1).size(), 45u);
  const auto f = choose_spike_family(20, 2, 128, 1);
  EXPECT_EQ(f.size(), 128u);
  EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
  EXPECT_EQ(std::adjacent_find(f.begin(), f.end()), f.end());
}

TEST(BlockEvolution, ReproducesDenseExponential) {
  const LocalInstance inst = make(6, 3, 2, 0.8, 3);
  const std::uint32_t mask = 0b100101u;
  auto g = std::make_shared<const std::vector<double>>(inst.g.g);
  const CMatrix h = Hamiltonian::spiked(6, g, mask, 0.8).matrix();
  const CMatrix u = expm_unitary(HermitianMatrix(h), 1.7);
  const CVector psi = random_state(6, 1);
  CVector block = psi;
  apply_spiked_evolution(inst.g.g, mask, 0.8, 1.7, block);
  EXPECT_LE((block - u * psi).norm(), 1e-9);
}

TEST(SplitBound, TrivialCases) {
  const LocalInstance zero_beta = make(8, 3, 2, 0.0, 1);
  const CVector psi = random_state(8, 2);
  EXPECT_NEAR(per_step_split_bound(zero_beta, 0b11u, psi, 2.0).exact_dist, 0.0, 1e-15);
  const LocalInstance inst = make(8, 3, 2, 1.0, 1);
  EXPECT_NEAR(per_step_split_bound(inst, 0b11u, psi, 0.0).exact_dist, 0.0, 1e-15);
  EXPECT_THROW(per_step_split_bound(inst, 0b11u, CVector(2 * psi), 1.0), PreconditionError);
  EXPECT_THROW(per_step_split_bound(inst, 0u, psi, 1.0), PreconditionError);
}

TEST(SplitBound, MatchesDenseAction) {
  const LocalInstance inst = make(7, 3, 2, 0.6, 8);
  const std::uint32_t mask = 0b1010u;
  const CVector psi = random_state(7, 3);
  auto g = std::make_shared<const std::vector<double>>(inst.g.g);
  const CMatrix e0 = expm_unitary(HermitianMatrix(Hamiltonian::diagonal(7, g).matrix()), 1.1);
  const CMatrix e1 = expm_unitary(HermitianMatrix(Hamiltonian::spiked(7, g, mask, 0.6).matrix()), 1.1);
  const SplitBound sb = per_step_split_bound(inst, mask, psi, 1.1);
  EXPECT_NEAR(sb.exact_dist, ((e0 - e1) * psi).norm(), 1e-9);
  EXPECT_TRUE(sb.holds);
}

TEST(SplitBound, StateOutsideVUsesGapTerm) {
  const LocalInstance inst = make(8, 3, 2, 0.05, 6);
  const std::uint32_t mask = 0b11000u;
  const double thr = goodness_threshold(8, 3, 2, -0.1);
  CVector psi = CVector::Zero(256);
  for (std::size_t x = 0; x < 256; ++x) {
    if (std::abs(inst.g.g[x] - inst.g.g[x ^ mask]) > thr) psi(static_cast<Eigen::Index>(x)) = 1.0;
  }
  ASSERT_GT(psi.norm(), 0.0);
  psi.normalize();
  for (double t : {0.1, 1.0, 5.0}) {
    const SplitBound sb = per_step_split_bound(inst, mask, psi, t);
    EXPECT_EQ(sb.projector_norm, 0.0);
    EXPECT_GT(sb.min_outside_gap, thr);
    EXPECT_LE(sb.exact_dist, kSplitGuard * std::min({2.0 * 0.05 / sb.min_outside_gap, 0.05 * t, 1.0}));
    EXPECT_TRUE(sb.holds);
  }
}

TEST(SpikeAveragedProjector, EqualsGoodnessFractions) {
  for (std::uint64_t seed : {1u, 2u}) {
    const LocalInstance inst = make(10, 3, 2, 1.0, seed);
    for (double e : {0.1, -0.1}) {
      const auto avg = spike_averaged_projector(inst, SpikeMode::uniform_exactly_c, e);
      const GoodnessReport good = goodness_check(inst, e);
      for (std::size_t x = 0; x < avg.size(); ++x) EXPECT_EQ(avg[x], good.per_x_fraction[x]);
    }
  }
}
