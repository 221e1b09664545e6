#include <gtest/gtest.h>

#include <cmath>

#include "hamlb/common.hpp"
#include "hamlb/fourier.hpp"

using namespace hamlb;

namespace {

std::vector<double> naive_wht(const std::vector<double>& f, int n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> out(size, 0.0);
  for (std::size_t s = 0; s < size; ++s) {
    for (std::size_t x = 0; x < size; ++x) {
      out[s] += f[x] * ((popcount(s & x) & 1) ? -1.0 : 1.0);
    }
    out[s] /= static_cast<double>(size);
  }
  return out;
}

}  // namespace

TEST(Wht, MatchesNaiveTransform) {
  Rng rng = make_rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n : {0, 1, 3, 7}) {
    std::vector<double> f(std::size_t{1} << n);
    for (auto& v : f) v = normal(rng);
    const FourierTable fast = wht_forward(BooleanTable(n, f));
    const auto slow = naive_wht(f, n);
    for (std::size_t s = 0; s < f.size(); ++s) EXPECT_NEAR(fast[s], slow[s], 1e-12);
  }
}

TEST(Wht, RoundTrip) {
  Rng rng = make_rng(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 12;
  std::vector<double> f(std::size_t{1} << n);
  for (auto& v : f) v = normal(rng);
  const BooleanTable back = wht_inverse(wht_forward(BooleanTable(n, f)));
  for (std::size_t x = 0; x < f.size(); ++x) EXPECT_NEAR(back[x], f[x], 1e-10);
}

TEST(Wht, ParsevalAndCharacters) {
  // A single character has a single unit coefficient.
  const int n = 5;
  std::vector<double> chi(32);
  for (std::size_t x = 0; x < 32; ++x) chi[x] = (popcount(x & 0b10110u) & 1) ? -1.0 : 1.0;
  const FourierTable f = wht_forward(BooleanTable(n, chi));
  for (std::size_t s = 0; s < 32; ++s) EXPECT_NEAR(f[s], s == 0b10110u ? 1.0 : 0.0, 1e-15);
}

TEST(Tables, ValidateLength) {
  EXPECT_THROW(BooleanTable(3, std::vector<double>(7)), PreconditionError);
  EXPECT_THROW(FourierTable(25, std::vector<double>(1)), DimensionGuardError);
}

TEST(HardFunction, BentSamplerCertifiesFirstAttempt) {
  for (int n : {4, 5, 8, 11, 12}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const HardFunction h = sample_hard_function(n, 0.1, seed);
      const double amp = std::exp2(0.4 * n);
      EXPECT_EQ(h.certificate.attempts, 1);
      EXPECT_LE(h.fourier.max_abs(), 1.0);
      EXPECT_DOUBLE_EQ(h.certificate.amplitude, amp);
      for (double v : h.table.values()) EXPECT_EQ(std::abs(v), amp);
    }
  }
}

TEST(HardFunction, BentSpectrumIsFlat) {
  // Even n: every |fhat(S)| equals 2^{-n/2} times the amplitude.
  const HardFunction h = sample_hard_function(10, 0.1, 3);
  const double expected = h.certificate.amplitude * std::exp2(-5.0);
  for (double c : h.fourier.coeffs()) EXPECT_NEAR(std::abs(c), expected, 1e-12);
}

TEST(HardFunction, Deterministic) {
  const HardFunction a = sample_hard_function(9, 0.1, 42);
  const HardFunction b = sample_hard_function(9, 0.1, 42);
  EXPECT_EQ(a.table.values(), b.table.values());
  const HardFunction c = sample_hard_function(9, 0.1, 43);
  EXPECT_NE(a.table.values(), c.table.values());
}

TEST(HardFunction, IndependentModeFailsLoudlyWhenUncertifiable) {
  EXPECT_THROW(sample_hard_function(12, 0.1, 0, SamplerMode::independent), CertificationError);
}

TEST(HardFunction, IndependentModeWorksWhenLoose) {
  // At large delta the amplitude is small and random signs certify.
  const HardFunction h = sample_hard_function(6, 0.45, 1, SamplerMode::independent);
  EXPECT_LE(h.fourier.max_abs(), 1.0);
  EXPECT_EQ(h.certificate.attempt_max_fourier.size(), static_cast<std::size_t>(h.certificate.attempts));
}

TEST(HardFunction, RejectsBadParameters) {
  EXPECT_THROW(sample_hard_function(0, 0.1, 0), PreconditionError);
  EXPECT_THROW(sample_hard_function(4, 0.5, 0), PreconditionError);
  EXPECT_THROW(sample_hard_function(4, 0.0, 0), PreconditionError);
}

TEST(LiftToG, FourierCoefficientsCopy) {
  const HardFunction h = sample_hard_function(7, 0.1, 2);
  const BooleanTable g = lift_to_g(h.table);
  ASSERT_EQ(g.n(), 8);
  const FourierTable gh = wht_forward(g);
  for (std::size_t s = 0; s < gh.coeffs().size(); ++s) EXPECT_NEAR(gh[s], h.fourier[s >> 1], 1e-12);
  for (std::size_t b = 0; b < g.values().size(); ++b) {
    EXPECT_EQ(g[b], (b & 1) ? 0.0 : 2.0 * h.table[b >> 1]);
  }
}

TEST(Serialization, RoundTripAndMagic) {
  const HardFunction h = sample_hard_function(6, 0.2, 8);
  const std::string bytes = serialize(h.table);
  EXPECT_EQ(bytes.substr(0, 4), "HLBT");
  EXPECT_EQ(bytes.size(), 8u + 8u * 64u);
  EXPECT_EQ(deserialize_boolean_table(bytes).values(), h.table.values());
  const std::string fb = serialize(h.fourier);
  EXPECT_EQ(deserialize_fourier_table(fb).coeffs(), h.fourier.coeffs());
  EXPECT_THROW(deserialize_fourier_table(bytes), PreconditionError);
  EXPECT_THROW(deserialize_boolean_table(bytes.substr(0, bytes.size() - 1)), PreconditionError);
}
