#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "hamlb/linalg.hpp"
#include "hamlb/local_case.hpp"
#include "hamlb/worst_case.hpp"

namespace hamlb {

/// diag(g) + beta X_T; beta = 0 or T = 0 gives the diagonal Hamiltonian.
struct BlockHamiltonian {
  std::shared_ptr<const std::vector<double>> g;
  std::uint32_t flip_mask = 0;
  double beta = 0.0;
};

struct DenseHamiltonian {
  std::shared_ptr<const HermitianMatrix> h;
  std::shared_ptr<const EigenSystem> eig;
};

class Hamiltonian {
 public:
  static Hamiltonian diagonal(int n, std::shared_ptr<const std::vector<double>> g);
  static Hamiltonian spiked(int n, std::shared_ptr<const std::vector<double>> g,
                            std::uint32_t flip_mask, double beta);
  /// Diagonalized once on construction (dimension <= kMaxDenseDim).
  static Hamiltonian dense(HermitianMatrix h);

  int n() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const std::variant<BlockHamiltonian, DenseHamiltonian>& rep() const { return rep_; }

  /// state <- e^{-iHt} state
  void evolve(CVector& state, double t) const;
  /// Dense matrix (n <= kMaxDenseQubits).
  CMatrix matrix() const;

 private:
  Hamiltonian(int n, std::variant<BlockHamiltonian, DenseHamiltonian> rep)
      : n_(n), rep_(std::move(rep)) {}
  int n_;
  std::variant<BlockHamiltonian, DenseHamiltonian> rep_;
};

/// || e^{-iH0 t} - e^{-iH1 t} ||_inf. Block Hamiltonians over the same
/// diagonal with compatible flips use 2x2 blocks; anything else goes dense.
double step_opnorm(const Hamiltonian& h0, const Hamiltonian& h1, double t);

struct IdentityUnitary {};
struct HaarUnitary {
  std::uint64_t seed = 0;
};
/// Tensor product of independent single-qubit Haar unitaries.
struct TensorHaarUnitary {
  std::uint64_t seed = 0;
};
struct ExplicitUnitary {
  CMatrix u;
};
using UnitarySpec = std::variant<IdentityUnitary, HaarUnitary, TensorHaarUnitary, ExplicitUnitary>;

struct Round {
  UnitarySpec unitary;
  double t = 0.0;
};

struct RoundSchedule {
  std::vector<Round> rounds;
  bool allow_time_reversal = false;

  std::size_t m() const { return rounds.size(); }
  void validate() const;
};

/// QR of a complex Ginibre matrix with the phases of diag(R) absorbed.
CMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed);
CMatrix tensor_haar_unitary(int n, std::uint64_t seed);

/// Unitaries built once; an empty matrix stands for the identity.
struct MaterializedSchedule {
  std::vector<CMatrix> unitaries;
  std::vector<double> times;
  std::size_t m() const { return times.size(); }
};

MaterializedSchedule materialize(const RoundSchedule& schedule, int n);

enum class UnitaryKind { identity, haar, tensor_haar };

/// m rounds with t_j uniform on [0, t_max] and unitaries of the given kind,
/// each seeded from (seed, j).
RoundSchedule random_schedule(std::size_t m, double t_max, UnitaryKind kind, std::uint64_t seed);

struct Advantage {
  double helstrom = 0.0;        ///< (1/2) sqrt(1 - |<a|b>|^2)
  double euclidean_half = 0.0;  ///< (1/2) ||a - b||_2
};

/// Both inputs must be unit norm to 1e-8.
Advantage optimal_advantage(const CVector& a, const CVector& b);

struct GameOptions {
  bool explicit_hybrids = true;  ///< build every hybrid state, O(m^2) products
  bool compute_bounds = true;    ///< per-step operator-norm bounds
};

struct GameTranscript {
  std::vector<double> times;
  CVector final_unspiked;
  CVector final_spiked;
  /// delta_k = || (e^{-iH0 t_k} - e^{-iH1 t_k}) U_k psi_{k-1} ||_2
  std::vector<double> per_step_dist;
  /// || phi_k - phi_{k-1} || from explicit hybrids (empty unless requested).
  std::vector<double> per_step_dist_explicit;
  std::vector<double> per_step_bound;
  double total_dist = 0.0;
  double sum_delta = 0.0;
  Advantage advantage;
  double max_norm_defect = 0.0;
  double hybrid_discrepancy = 0.0;  ///< max gap between the two delta routes and chain endpoints
  bool hybrid_chain_holds = false;  ///< total_dist <= sum_delta + 1e-9
  bool domination_holds = true;     ///< delta_k <= bound_k + 1e-9
  bool norms_hold = false;          ///< max_norm_defect <= 1e-10
};

GameTranscript run_game(const Hamiltonian& h0, const Hamiltonian& h1,
                        const MaterializedSchedule& schedule, const GameOptions& opts = {});
GameTranscript run_game(const Hamiltonian& h0, const Hamiltonian& h1,
                        const RoundSchedule& schedule, const GameOptions& opts = {});

struct SearchOptions {
  std::size_t m = 1;
  int restarts = 50;
  int iterations = 40;
  std::uint64_t seed = 0;
  bool search_unitaries = true;
  double t_min = 0.0;  ///< zero selects the worst-case t-grid range
  double t_max = 0.0;
};

struct SearchResult {
  std::size_t m = 0;
  RoundSchedule best_schedule;
  GameTranscript best;
  std::vector<double> per_restart_best;
  std::vector<double> best_by_depth;  ///< best total_dist for 1..m rounds
  double t_min = 0.0;
  double t_max = 0.0;
  bool bounds_hold = false;           ///< total_dist <= sum of per-step bounds
};

/// Randomized hill climbing over times (log scale) and unitaries (random
/// two-qubit geodesic steps). The m-round search is seeded with the best
/// (m-1)-round schedule behind an idle round, so the best value never
/// decreases with m. Requires n <= 10.
SearchResult adversarial_schedule_search(const WorstCaseInstance& inst, const SearchOptions& opts);

struct AverageGameOptions {
  SpikeMode mode = SpikeMode::uniform_exactly_c;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  double threshold_exponent = -0.1;
  double guard = kSplitGuard;
};

struct AverageGameReport {
  std::size_t m = 0;
  std::size_t samples = 0;
  double threshold_exponent = 0.0;
  double threshold = 0.0;
  double mean_total = 0.0;
  double se_total = 0.0;
  std::vector<double> mean_delta;         ///< per round, over spikes
  std::vector<double> mean_split_bound;   ///< per round, over spikes
  double envelope = 0.0;                  ///< max_k mean_delta_k / beta
  double bound_value = 0.0;               ///< m beta envelope
  bool bound_holds = false;               ///< mean_total <= bound_value + 3 se_total
  /// Per round: E_T ||Pi_{V_T} psi_k||^2 summed spike by spike, and the
  /// quadratic form of the averaged projector diagonal.
  std::vector<double> projector_exact;
  std::vector<double> projector_quadratic;
  std::vector<double> projector_sampled;  ///< Monte-Carlo mean over drawn spikes
  double max_projector_discrepancy = 0.0;
  /// Averaged projector diagonal equals goodness fractions entrywise
  /// (exactly-c spikes only; true otherwise).
  bool projector_matches_goodness = false;
  double max_fraction_difference = 0.0;
  bool split_bounds_hold = true;
};

AverageGameReport average_case_game(const LocalInstance& inst, const RoundSchedule& schedule,
                                    const AverageGameOptions& opts = {});

}  // namespace hamlb
