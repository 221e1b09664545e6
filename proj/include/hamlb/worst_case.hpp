#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hamlb/fourier.hpp"
#include "hamlb/pauli.hpp"

namespace hamlb {

inline constexpr double kGuard = 16.0;

/// Dense and block distances are compared only for t * max|g| up to this
/// scale; beyond it, eigenvalue rounding times t dominates 1e-9.
inline constexpr double kDenseCompareScale = 1e4;

/// Z-supported M with alpha_{Z_S} = ghat(S), where g(x) = f(x_{-n})(1 + x_n)
/// lifts a certified hard function f on n-1 bits, and the spike X on qubit 0.
struct WorstCaseInstance {
  int n = 0;
  double delta = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  HardFunctionCertificate certificate;
  FourierTable alpha_dense{0, {0.0}};  ///< ghat(S), indexed by the Z mask
  DiagonalHamiltonian g;               ///< diagonal of M, from alpha_dense
  PauliString spike{1, 1u, 0u};
  std::vector<double> block_gaps;      ///< distinct |g_x - g_{x^1}|, ascending

  double alpha_max_abs() const { return alpha_dense.max_abs(); }
  double g_max_abs() const;
  /// Sparse form of alpha (n <= 20).
  CoeffVector alpha() const;
};

/// Throws CertificationError when the sampler fails and PreconditionError on
/// bad parameters. Every structural invariant is checked before returning.
WorstCaseInstance build_worst_instance(int n, double delta, double beta, std::uint64_t seed,
                                       SamplerMode mode = SamplerMode::bent);

/// max over block pairs of || e^{-iM_x t} - e^{-i(M_x + beta X)t} ||_inf.
double exact_block_distance(const WorstCaseInstance& inst, double t);

/// Same quantity from the full 2^n matrices (n <= 8 by default guard).
double dense_block_distance(const WorstCaseInstance& inst, double t);

/// beta * 2^{-(1/2 - delta) n}
double distance_bound(const WorstCaseInstance& inst);

/// {2^j pi / (4 max|g|) : j = 0..max_j}
std::vector<double> default_t_grid(const WorstCaseInstance& inst, int max_j = 40);

/// Finite surrogate of sup_{t >= 0}: grid evaluation plus golden-section
/// refinement around the grid maximum.
struct SupSearch {
  std::vector<double> t_grid;
  std::vector<double> distances;
  double refined_t = 0.0;
  double refined_distance = 0.0;
  double sup = 0.0;
  double sup_t = 0.0;
  double bound = 0.0;
  double max_ratio = 0.0;          ///< sup / bound (0 when both vanish)
  double guard = kGuard;
  bool envelope_pass = false;      ///< sup <= guard * bound
  double max_trivial_excess = 0.0; ///< max_t d(t) - min(beta t, 2)
  bool trivial_pass = false;       ///< excess <= 1e-9
};

SupSearch sup_distance(const WorstCaseInstance& inst, std::vector<double> t_grid,
                       double guard = kGuard);

}  // namespace hamlb
