#include <gtest/gtest.h>

#include <cmath>

#include "hamlb/common.hpp"
#include "hamlb/worst_case.hpp"

using namespace hamlb;

TEST(WorstInstance, CoefficientsComeFromLiftedFunction) {
  const WorstCaseInstance inst = build_worst_instance(8, 0.1, 1.0, 7);
  const HardFunction f = sample_hard_function(7, 0.1, 7);
  EXPECT_NEAR(inst.alpha_dense[0], f.fourier[0], 1e-12);
  const CoeffVector alpha = inst.alpha();
  EXPECT_TRUE(alpha.is_z_only());
  EXPECT_NEAR(alpha.get(PauliString::identity(8)), f.fourier[0], 1e-12);
  EXPECT_LE(alpha.max_abs(), 1.0);
  EXPECT_EQ(inst.spike, PauliString::x_on(8, 1u));
}

TEST(WorstInstance, BlockDiagonalIsTwiceFAndZero) {
  const WorstCaseInstance inst = build_worst_instance(9, 0.1, 1.0, 3);
  const HardFunction f = sample_hard_function(8, 0.1, 3);
  for (std::size_t b = 0; b < inst.g.g.size(); b += 2) {
    EXPECT_NEAR(inst.g.g[b], 2.0 * f.table[b >> 1], 1e-9);
    EXPECT_NEAR(inst.g.g[b + 1], 0.0, 1e-9);
  }
  EXPECT_GE(inst.block_gaps.front(), 2.0 * std::exp2(0.4 * 8) * (1 - 1e-12));
}

TEST(WorstInstance, RejectsBadParameters) {
  EXPECT_THROW(build_worst_instance(1, 0.1, 1.0, 0), PreconditionError);
  EXPECT_THROW(build_worst_instance(6, 0.1, -1.0, 0), PreconditionError);
}

TEST(BlockDistance, ZeroSpikeAndZeroTime) {
  const WorstCaseInstance zero = build_worst_instance(10, 0.1, 0.0, 1);
  for (double t : {0.0, 0.5, 3.0, 1e4}) EXPECT_EQ(exact_block_distance(zero, t), 0.0);
  const WorstCaseInstance inst = build_worst_instance(10, 0.1, 1.0, 1);
  EXPECT_NEAR(exact_block_distance(inst, 0.0), 0.0, 1e-15);
  EXPECT_THROW(exact_block_distance(inst, -1.0), PreconditionError);
}

TEST(BlockDistance, MatchesDenseForSmallN) {
  for (int n : {3, 5, 8}) {
    const WorstCaseInstance inst = build_worst_instance(n, 0.1, 1.5, 11);
    for (double t : default_t_grid(inst, 12)) {
      EXPECT_NEAR(exact_block_distance(inst, t), dense_block_distance(inst, t), 1e-9)
          << "n=" << n << " t=" << t;
    }
  }
}

TEST(BlockDistance, TrivialBound) {
  const WorstCaseInstance inst = build_worst_instance(12, 0.1, 0.7, 4);
  for (double t : default_t_grid(inst)) {
    EXPECT_LE(exact_block_distance(inst, t), std::min(0.7 * t, 2.0) + 1e-9);
  }
}

TEST(BlockDistance, DependsOnlyOnTheGapMagnitude) {
  const WorstCaseInstance inst = build_worst_instance(8, 0.1, 2.0, 5);
  const auto& g = inst.g.g;
  for (double t : {0.3, 2.0, 17.0}) {
    const double ref = block2_diff_norm(std::abs(g[0] - g[1]), 0.0, 2.0, t);
    for (std::size_t b = 0; b < g.size(); b += 2) {
      EXPECT_NEAR(block2_diff_norm(g[b], g[b + 1], 2.0, t), ref, 1e-12);
    }
  }
}

TEST(DistanceBound, Formula) {
  const WorstCaseInstance inst = build_worst_instance(10, 0.1, 1.0, 0);
  EXPECT_DOUBLE_EQ(distance_bound(inst), std::exp2(-4.0));
  const WorstCaseInstance doubled = build_worst_instance(10, 0.1, 2.0, 0);
  EXPECT_DOUBLE_EQ(distance_bound(doubled), 2.0 * distance_bound(inst));
}

TEST(SupSearch, GridAndRefinement) {
  const WorstCaseInstance inst = build_worst_instance(10, 0.1, 4.0, 2);
  const auto grid = default_t_grid(inst);
  ASSERT_EQ(grid.size(), 41u);
  EXPECT_NEAR(grid[1] / grid[0], 2.0, 1e-15);
  const SupSearch s = sup_distance(inst, grid);
  EXPECT_GE(s.sup, *std::max_element(s.distances.begin(), s.distances.end()));
  EXPECT_TRUE(s.trivial_pass);
  EXPECT_NEAR(s.max_ratio, s.sup / s.bound, 1e-12);
  EXPECT_EQ(s.envelope_pass, s.sup <= 16.0 * s.bound);
}

TEST(SupSearch, ZeroSpikeGivesZeroRatio) {
  const WorstCaseInstance inst = build_worst_instance(6, 0.1, 0.0, 2);
  const SupSearch s = sup_distance(inst, default_t_grid(inst));
  EXPECT_EQ(s.sup, 0.0);
  EXPECT_EQ(s.max_ratio, 0.0);
  EXPECT_TRUE(s.envelope_pass);
}
