#pragma once

#include <cstdint>
#include <vector>

#include "hamlb/linalg.hpp"
#include "hamlb/pauli.hpp"

namespace hamlb {

enum class SupportDegree { exactly_k, up_to_k };
enum class SpikeMode { uniform_exactly_c, uniform_up_to_c };

/// 1 / (10 k ln n)
double local_sigma2(int n, int k);

struct LocalParams {
  int n = 10;
  int k = 3;
  int c = 2;
  double beta = 1.0;
  SupportDegree degree = SupportDegree::exactly_k;
  std::uint64_t seed = 0;

  /// c >= 2, ceil(3c/2) <= k <= 3c, 3 <= k <= n, n <= 24.
  void validate() const;
};

struct LocalInstance {
  LocalParams params;
  double sigma2 = 0.0;
  CoeffVector alpha{1};
  DiagonalHamiltonian g;
  double alpha_max_abs = 0.0;
};

/// alpha_{Z_S} ~ N(0, sigma2) for every supported S, visited by size and then
/// in increasing mask order.
LocalInstance sample_local_instance(const LocalParams& params);

/// X_T with T uniform over c-subsets, or over nonempty subsets of size <= c.
PauliString sample_spike(int n, int c, SpikeMode mode, std::uint64_t seed);

/// The spike family: every T the mode can draw, in a fixed order.
std::vector<std::uint32_t> spike_family(int n, int c, SpikeMode mode);

/// n^{exponent (k - c)}
double goodness_threshold(int n, int k, int c, double exponent);

struct GoodnessReport {
  int n = 0, k = 0, c = 0;
  double threshold_exponent = 0.0;
  double threshold = 0.0;
  std::uint64_t num_spikes = 0;                ///< C(n, c)
  std::vector<std::uint32_t> per_x_count;      ///< #{T : |g_x - g_{x^T}| <= threshold}
  std::vector<double> per_x_fraction;
  double max_fraction = 0.0;
  double mean_fraction = 0.0;
};

/// Exhaustive count over every x and every c-subset T (n <= 20).
GoodnessReport goodness_check(const LocalInstance& inst, double threshold_exponent = 0.1);

struct CovarianceInstance {
  int n = 0, k = 0, c = 0;
  std::vector<std::uint32_t> t_list;
  std::vector<long long> q;  ///< d x d row-major
  double sigma2 = 0.0;

  std::size_t d() const { return t_list.size(); }
  long long operator()(std::size_t i, std::size_t j) const { return q[i * d() + j]; }
};

/// Q_ij = #{S : |S| = k, |S & T_i| and |S & T_j| odd}, by enumerating S
/// (n <= 20, k <= 6).
CovarianceInstance covariance_bruteforce(int n, int k, int c, std::vector<std::uint32_t> t_list);

/// All c-subsets when C(n, c) <= d_max, else d_max distinct random ones.
std::vector<std::uint32_t> choose_spike_family(int n, int c, std::size_t d_max,
                                               std::uint64_t seed);

struct PsdCheck {
  double min_eigenvalue = 0.0;
  double floor = 0.0;  ///< 4^{c-1} C(n-2c, k-c)
  bool pass = false;   ///< min_eigenvalue >= floor - 1e-6
};

PsdCheck covariance_psd_check(const CovarianceInstance& inst);

struct SplitBound {
  double exact_dist = 0.0;      ///< || (e^{-iMt} - e^{-i(M + beta X_T)t}) psi ||_2
  double projector_norm = 0.0;  ///< || Pi_V psi ||_2
  double min_outside_gap = 0.0; ///< smallest gap over outside blocks touched by psi
  double gap_term = 0.0;        ///< guard * min(2 beta / gap, beta t, 1)
  double split_bound = 0.0;
  double threshold = 0.0;
  bool holds = false;
};

inline constexpr double kSplitGuard = 16.0;

/// V = {x : |g_x - g_{x^T}| <= n^{exponent (k - c)}}. The state must be unit
/// norm to 1e-10 and T nonempty.
SplitBound per_step_split_bound(const LocalInstance& inst, std::uint32_t spike_mask,
                                const CVector& state, double t,
                                double threshold_exponent = -0.1, double guard = kSplitGuard);

/// Diagonal of E_T[Pi_{V_T}] over the spike family, built spike by spike.
std::vector<double> spike_averaged_projector(const LocalInstance& inst, SpikeMode mode,
                                             double threshold_exponent);

/// Applies e^{-i(diag(g) + beta X_T)t} to a state in place via 2x2 blocks.
void apply_spiked_evolution(const std::vector<double>& g, std::uint32_t spike_mask, double beta,
                            double t, CVector& state);

/// Applies e^{-i diag(g) t} in place.
void apply_diagonal_evolution(const std::vector<double>& g, double t, CVector& state);

}  // namespace hamlb
