#include <gtest/gtest.h>

#include "hamlb/combinatorics.hpp"
#include "hamlb/common.hpp"

using namespace hamlb;

TEST(BinomTable, PascalAndEdges) {
  const BinomTable b(70);
  EXPECT_EQ(b(0, 0), 1);
  EXPECT_EQ(b(10, 3), 120);
  EXPECT_EQ(b(5, 7), 0);
  EXPECT_EQ(b(5, -1), 0);
  EXPECT_EQ(b(70, 35), BigInt("112186277816662845432"));
  for (int a = 1; a <= 70; ++a) {
    EXPECT_EQ(b(a, 0), 1);
    EXPECT_EQ(b(a, a), 1);
    for (int k = 1; k < a; ++k) EXPECT_EQ(b(a, k), b(a - 1, k - 1) + b(a - 1, k));
  }
  EXPECT_THROW(b(71, 0), PreconditionError);
}

TEST(ZCount, HandExample) {
  const BinomTable b(20);
  // A = {1, 2}, B = {2, 3} in {1..6}; subsets of size 3 meeting each in one element.
  EXPECT_EQ(z_count({6, 3, 2, 1}, ZMethod::enumerate, b), 6);
  EXPECT_EQ(z_count({6, 3, 2, 1}, ZMethod::partition_sum, b), 6);
}

TEST(ZCount, Degenerate) {
  const BinomTable b(20);
  EXPECT_EQ(z_count({8, 0, 3, 3}, ZMethod::enumerate, b), 0);
  EXPECT_EQ(z_count({8, 0, 3, 3}, ZMethod::partition_sum, b), 0);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(z_count({8, k, 0, 0}, ZMethod::enumerate, b), 0);
    EXPECT_EQ(z_count({8, k, 0, 0}, ZMethod::partition_sum, b), 0);
  }
}

TEST(ZCount, MethodsAgreeOnFeasibleRange) {
  const BinomTable b(20);
  for (int n = 0; n <= 14; ++n)
    for (int k = 0; k <= std::min(6, n); ++k)
      for (int c = 0; c <= std::min(4, n); ++c)
        for (int t = 0; t <= c; ++t) {
          if (2 * c - t > n) continue;
          EXPECT_EQ(z_count({n, k, c, t}, ZMethod::enumerate, b),
                    z_count({n, k, c, t}, ZMethod::partition_sum, b))
              << n << " " << k << " " << c << " " << t;
        }
}

TEST(ZCount, Guards) {
  const BinomTable b(1000);
  EXPECT_THROW(z_count({6, 3, 4, 1}, ZMethod::partition_sum, b), PreconditionError);
  EXPECT_THROW(z_count({6, 7, 2, 1}, ZMethod::partition_sum, b), PreconditionError);
  EXPECT_THROW(z_count({60, 30, 2, 1}, ZMethod::enumerate, b), PreconditionError);
  EXPECT_NO_THROW(z_count({1000, 30, 4, 2}, ZMethod::partition_sum, b));
}

TEST(SimpleIdentity, Examples) {
  const BinomTable b(70);
  EXPECT_EQ(verify_simple_identity(2, 2, b).sum, 1);
  EXPECT_EQ(verify_simple_identity(2, 1, b).sum, 0);
  for (int l = 0; l <= 64; ++l)
    for (int t = 0; t <= l; ++t) EXPECT_TRUE(verify_simple_identity(l, t, b).pass) << l << " " << t;
}

TEST(ComplexIdentity, TopTermIsTheFloor) {
  const BinomTable b(40);
  for (int c = 1; c <= 4; ++c)
    for (int n = 2 * c; n <= 20; ++n)
      for (int k = c; k <= std::min(n, 3 * c); ++k) {
        Rational expected = b(n - 2 * c, k - c);
        for (int i = 1; i < c; ++i) expected *= 4;
        EXPECT_EQ(complex_identity_rhs(n, k, c, c, b), expected);
      }
}

TEST(ComplexIdentity, HoldsForPositiveR) {
  const BinomTable b(20);
  for (int c = 1; c <= 4; ++c)
    for (int k = (3 * c + 1) / 2; k <= 3 * c; ++k)
      for (int n = std::max(2 * c, k); n <= 16; ++n)
        for (int r = 1; r <= c; ++r) {
          const auto res = verify_complex_identity(n, k, c, r, b);
          EXPECT_TRUE(res.methods_agree);
          EXPECT_TRUE(res.pass) << n << " " << k << " " << c << " " << r;
        }
}

TEST(ComplexIdentity, ZeroRUsesExactQuarterFactor) {
  const BinomTable b(20);
  // r = 0: the left side is z_0 and the right side carries 4^{-1}.
  const auto res = verify_complex_identity(6, 3, 2, 0, b);
  EXPECT_EQ(res.lhs, z_count({6, 3, 2, 0}, ZMethod::enumerate, b));
  EXPECT_EQ(res.rhs, complex_identity_rhs(6, 3, 2, 0, b));
  EXPECT_EQ(res.rhs, 1);  // (1/4)(-4 + 12 - 4)
  EXPECT_EQ(res.lhs, 8);
  EXPECT_FALSE(res.pass);
}

TEST(Nonnegativity, ReportedPerR) {
  const BinomTable b(20);
  const auto res = verify_alternating_nonnegativity(16, 3, 2, b);
  ASSERT_EQ(res.rhs_by_r.size(), 3u);
  EXPECT_TRUE(res.pass);
  for (const auto& v : res.rhs_by_r) EXPECT_GE(v, 0);
  const auto small = verify_alternating_nonnegativity(12, 3, 2, b);
  EXPECT_FALSE(small.pass);
  EXPECT_EQ(small.rhs_by_r[0], -3);
  const auto th = nonnegativity_threshold(3, 2, 20, b);
  EXPECT_EQ(th.min_n, 15);
  for (int n : th.violating_n) EXPECT_LT(n, th.min_n);
}

TEST(Reconstruction, HoldsEverywhere) {
  const BinomTable b(30);
  for (int c = 1; c <= 4; ++c)
    for (int n = 2 * c; n <= 20; ++n)
      for (int k = 0; k <= n; ++k) EXPECT_TRUE(verify_reconstruction(n, k, c, b));
}

TEST(IdentitySweep, CountsAndFailureBookkeeping) {
  const IdentitySweepReport rep = run_identity_sweep(10, 10, 2);
  EXPECT_EQ(rep.simple_failed, 0);
  EXPECT_EQ(rep.method_disagreements, 0);
  EXPECT_EQ(rep.reconstruction_failed, 0);
  EXPECT_EQ(rep.complex_failed, rep.complex_failed_r0);
  EXPECT_EQ(static_cast<long>(rep.complex_failures.size()), rep.complex_failed);
  for (const auto& f : rep.complex_failures) EXPECT_EQ(f.r, 0);
}
