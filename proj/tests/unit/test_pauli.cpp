#include <gtest/gtest.h>

#include <random>

#include "hamlb/common.hpp"
#include "hamlb/pauli.hpp"

using namespace hamlb;

namespace {

// Kronecker product P_{n-1} (x) ... (x) P_0 from single-qubit letters.
CMatrix kron_oracle(const std::string& letters) {
  auto single = [](char c) {
    Matrix2c m;
    switch (c) {
      case 'X': m << 0, 1, 1, 0; break;
      case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
      case 'Z': m << 1, 0, 0, -1; break;
      default: m.setIdentity();
    }
    return CMatrix(m);
  };
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : letters) {
    const CMatrix s = single(c);
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * s;
    out = next;
  }
  return out;
}

std::string random_letters(int n, Rng& rng) {
  const char* alphabet = "IXYZ";
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(alphabet[rng() % 4]);
  return s;
}

}  // namespace

TEST(PauliString, ValidatesMasks) {
  EXPECT_THROW(PauliString(0, 0, 0), std::exception);
  EXPECT_THROW(PauliString(2, 4u, 0u), PreconditionError);
  EXPECT_THROW(PauliString(25, 0u, 0u), std::exception);
}

TEST(PauliString, StringFormPutsQubitZeroRightmost) {
  const PauliString p = PauliString::from_string("ZX");
  EXPECT_EQ(p.x_mask(), 1u);
  EXPECT_EQ(p.z_mask(), 2u);
  EXPECT_EQ(p.str(), "ZX");
  EXPECT_EQ(PauliString::from_string("Y_I").locality(), 1);
  EXPECT_TRUE(PauliString::from_string("IZZ").is_z_type());
  EXPECT_FALSE(PauliString::from_string("IYZ").is_z_type());
  EXPECT_TRUE(PauliString::from_string("XYZ").is_k_local(3));
  EXPECT_FALSE(PauliString::from_string("XYZ").is_k_local(2));
}

TEST(PauliMatrix, MatchesKroneckerOracle) {
  Rng rng = make_rng(1);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::string s = random_letters(n, rng);
      EXPECT_LE(max_abs(pauli_matrix(PauliString::from_string(s)) - kron_oracle(s)), 1e-15) << s;
    }
  }
}

TEST(PauliProductTest, MatchesDenseProducts) {
  Rng rng = make_rng(2);
  const Complex i_pow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const std::string a = random_letters(n, rng);
    const std::string b = random_letters(n, rng);
    const PauliProduct prod = multiply(PauliString::from_string(a), PauliString::from_string(b));
    const CMatrix lhs = kron_oracle(a) * kron_oracle(b);
    const CMatrix rhs = i_pow[prod.phase] * pauli_matrix(prod.result);
    EXPECT_LE(max_abs(lhs - rhs), 1e-14) << a << "*" << b;
  }
}

TEST(PauliProductTest, SquaresToIdentity) {
  const PauliString y = PauliString::from_string("Y");
  const PauliProduct p = multiply(y, y);
  EXPECT_EQ(p.phase, 0);
  EXPECT_EQ(p.result, PauliString::identity(1));
}

TEST(CoeffVector, SupportAndNorms) {
  CoeffVector c(3);
  c.set(PauliString::from_string("ZIZ"), 0.5);
  c.set(PauliString::from_string("IIZ"), -2.0);
  EXPECT_TRUE(c.is_z_only());
  EXPECT_EQ(c.support(), SupportKind::z_only);
  EXPECT_EQ(c.max_locality(), 2);
  EXPECT_DOUBLE_EQ(c.max_abs(), 2.0);
  const PauliString skip = PauliString::from_string("IIZ");
  EXPECT_DOUBLE_EQ(c.max_abs(&skip), 0.5);
  EXPECT_DOUBLE_EQ(c.l1_norm(), 2.5);
  c.set(PauliString::from_string("XII"), 1.0);
  EXPECT_FALSE(c.is_z_only());
  EXPECT_DOUBLE_EQ(c.get(PauliString::from_string("YYY")), 0.0);
}

TEST(CoeffVector, JsonRoundTrip) {
  CoeffVector c(4);
  c.set(PauliString::from_string("XYZI"), 0.25);
  c.set(PauliString::from_string("IIIZ"), -1.5);
  const std::string text = c.to_json();
  const CoeffVector back = CoeffVector::from_json(text);
  EXPECT_EQ(back.n(), 4);
  EXPECT_EQ(back.terms(), c.terms());
  EXPECT_EQ(back.to_json(), text);
}

TEST(CoeffVector, JsonRejectsMalformed) {
  EXPECT_THROW(CoeffVector::from_json("{\"n\": 2}"), std::exception);
  EXPECT_THROW(CoeffVector::from_json("not json"), std::exception);
  EXPECT_THROW(CoeffVector::from_json(
                   "{\"n\":2,\"terms\":[{\"x_mask\":0,\"z_mask\":1,\"coeff\":1},"
                   "{\"x_mask\":0,\"z_mask\":1,\"coeff\":2}]}"),
               PreconditionError);
  EXPECT_THROW(CoeffVector::from_json("{\"n\":2,\"terms\":[{\"x_mask\":8,\"z_mask\":0,\"coeff\":1}]}"),
               PreconditionError);
}

TEST(BuildDiagonal, MatchesBruteForceCharacterSum) {
  Rng rng = make_rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 6;
  CoeffVector c(n);
  for (int k = 0; k < 20; ++k) c.set(PauliString::z_on(n, static_cast<std::uint32_t>(rng() % 64)), normal(rng));
  const DiagonalHamiltonian d = build_diagonal(c);
  for (std::uint32_t x = 0; x < 64; ++x) {
    double sum = 0.0;
    for (const auto& [p, a] : c.terms()) sum += a * ((popcount(p.z_mask() & x) & 1) ? -1.0 : 1.0);
    EXPECT_NEAR(d.g[x], sum, 1e-12);
  }
  const CMatrix dense = dense_hamiltonian(c);
  for (int x = 0; x < 64; ++x) EXPECT_NEAR(dense(x, x).real(), d.g[static_cast<std::size_t>(x)], 1e-12);
  EXPECT_LE(max_abs(CMatrix(dense - CMatrix(dense.diagonal().asDiagonal()))), 0.0);
}

TEST(BuildDiagonal, RejectsNonZSupport) {
  CoeffVector c(2);
  c.set(PauliString::from_string("XI"), 1.0);
  EXPECT_THROW(build_diagonal(c), PreconditionError);
}

TEST(DenseHamiltonian, IsHermitianSumOfPaulis) {
  CoeffVector c(2);
  c.set(PauliString::from_string("XY"), 0.3);
  c.set(PauliString::from_string("ZI"), -0.7);
  const CMatrix h = dense_hamiltonian(c);
  EXPECT_LE(max_abs(CMatrix(h - h.adjoint())), 1e-15);
  EXPECT_LE(max_abs(CMatrix(h - 0.3 * kron_oracle("XY") + 0.7 * kron_oracle("ZI"))), 1e-15);
}

TEST(YFlip, NegatesCoordinatesInT) {
  // chi_S(x y_T) = (-1)^{|S & T|} chi_S(x)
  for (std::uint32_t x = 0; x < 16; ++x) {
    for (std::uint32_t t = 0; t < 16; ++t) {
      for (std::uint32_t s = 0; s < 16; ++s) {
        const int lhs = popcount(s & apply_y_flip(x, t)) & 1;
        const int rhs = (popcount(s & x) + popcount(s & t)) & 1;
        EXPECT_EQ(lhs, rhs);
      }
    }
  }
}
