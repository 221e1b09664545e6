#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamlb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;

/// Largest dimension accepted by the dense eigensolver and exponentials.
inline constexpr Eigen::Index kMaxDenseDim = 2048;

/// A dense complex matrix validated to be Hermitian on construction.
class HermitianMatrix {
 public:
  static constexpr double kTolerance = 1e-12;

  /// Throws PreconditionError if m is not square or not Hermitian to
  /// kTolerance (scaled by max(1, max|m_jk|)).
  explicit HermitianMatrix(CMatrix m);

  static HermitianMatrix diagonal(std::span<const double> values);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }

 private:
  CMatrix m_;
};

/// Eigenvalues in ascending order with the matching orthonormal columns.
struct EigenSystem {
  Eigen::VectorXd values;
  CMatrix vectors;
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Converges once the off-diagonal Frobenius mass is
/// at most 1e-13 of the Frobenius norm.
EigenSystem eig_hermitian(const HermitianMatrix& a);

/// e^{-iAt} = V diag(e^{-i lambda t}) V^dagger.
CMatrix expm_unitary(const HermitianMatrix& a, double t);
CMatrix expm_unitary(const EigenSystem& es, double t);

/// e^{sA} for real s, from a precomputed eigensystem.
CMatrix expm_real(const EigenSystem& es, double s);

/// Closed-form e^{-it [[a, beta], [beta, b]]}.
Matrix2c block2_exp(double a, double b, double beta, double t);

/// || diag(e^{-iat}, e^{-ibt}) - block2_exp(a, b, beta, t) ||_inf: the distance
/// between the unspiked and spiked evolution restricted to one 2x2 block.
double block2_diff_norm(double a, double b, double beta, double t);

/// Largest singular value.
double operator_norm(const CMatrix& m);
double operator_norm(const Matrix2c& m);

/// max_jk |m_jk|
double max_abs(const CMatrix& m);

/// max_jk |(U^dagger U - I)_jk|
double unitarity_defect(const CMatrix& u);

/// || e^{-iMt} - e^{-i(M + Delta)t} ||_inf for diagonal M. Delta must vanish on
/// the diagonal.
double opnorm_diff_exp(std::span<const double> m_diag, const HermitianMatrix& delta,
                       double t);

struct PerturbationSweepConfig {
  int dim = 32;
  double gap = 1000.0;         ///< minimum diagonal gap D
  double delta_norm = 1.0;     ///< ||Delta||_inf = C
  int trials = 100;
  std::vector<double> t_grid;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepRow {
  int trial;
  double t;
  double gap;
  double delta_norm;
  int dim;
  double lhs;
  double bound;
  double ratio;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double max_ratio = 0.0;
  /// max over rows of lhs - min(C t, 2); non-positive up to rounding.
  double max_trivial_excess = -2.0;
  double min_observed_gap = 0.0;
};

/// Samples diagonal M with consecutive gaps in [D, 5D/4] and a zero-diagonal
/// Hermitian Delta scaled to operator norm C, then records
/// lhs / min(C dim / D, C t, 1) for every t. 0/0 is reported as 0.
SweepReport perturbation_sweep(const PerturbationSweepConfig& cfg);

std::string sweep_csv(const SweepReport& report);

struct GaussLegendre {
  std::vector<double> nodes;    ///< on [-1, 1]
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int order);

struct DerivativeCheckOptions {
  double h = 1e-4;
  int quadrature_nodes = 32;  ///< total nodes, split into 8-point panels
};

/// Residual || d/dt e^{A+tV} - int_0^1 e^{(1-s)(A+tV)} V e^{s(A+tV)} ds ||_inf
/// with the derivative from Richardson-extrapolated central differences and
/// the integral from composite Gauss-Legendre quadrature.
double verify_derivative_identity(const HermitianMatrix& a, const HermitianMatrix& v,
                                  double t, const DerivativeCheckOptions& opts = {});

}  // namespace hamlb
