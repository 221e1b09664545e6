#include "hamlb/local_case.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hamlb/combinatorics.hpp"
#include "hamlb/common.hpp"

namespace hamlb {

double local_sigma2(int n, int k) {
  require(n >= 2 && k >= 1, "local_sigma2: need n >= 2 and k >= 1");
  return 1.0 / (10.0 * k * std::log(static_cast<double>(n)));
}

void LocalParams::validate() const {
  require(c >= 2, "LocalParams: c must be >= 2");
  require(2 * k >= 3 * c && k <= 3 * c, "LocalParams: need ceil(3c/2) <= k <= 3c");
  require(k >= 3 && k <= n, "LocalParams: need 3 <= k <= n");
  require_dim(n <= kMaxQubits, "LocalParams: n must be <= 24");
  require(beta >= 0.0 && std::isfinite(beta), "LocalParams: beta must be >= 0");
}

LocalInstance sample_local_instance(const LocalParams& params) {
  params.validate();
  LocalInstance inst;
  inst.params = params;
  inst.sigma2 = local_sigma2(params.n, params.k);
  inst.alpha = CoeffVector(params.n);
  Rng rng = make_rng(params.seed, 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(inst.sigma2));
  const int lowest = params.degree == SupportDegree::exactly_k ? params.k : 0;
  for (int size = lowest; size <= params.k; ++size) {
    for (std::uint32_t s : subsets_of_size(params.n, size)) {
      const double a = normal(rng);
      inst.alpha.set(PauliString::z_on(params.n, s), a);
      inst.alpha_max_abs = std::max(inst.alpha_max_abs, std::abs(a));
    }
  }
  inst.g = build_diagonal(inst.alpha);
  return inst;
}

std::vector<std::uint32_t> spike_family(int n, int c, SpikeMode mode) {
  require(c >= 1 && c <= n, "spike_family: need 1 <= c <= n");
  require_dim(n <= kMaxQubits, "spike_family: n must be <= 24");
  if (mode == SpikeMode::uniform_exactly_c) return subsets_of_size(n, c);
  std::vector<std::uint32_t> out;
  for (int s = 1; s <= c; ++s) {
    auto part = subsets_of_size(n, s);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

PauliString sample_spike(int n, int c, SpikeMode mode, std::uint64_t seed) {
  require(c >= 1 && c <= n, "sample_spike: need 1 <= c <= n");
  Rng rng = make_rng(seed, 0);
  int size = c;
  if (mode == SpikeMode::uniform_up_to_c) {
    // Size s is drawn with weight C(n, s) so that every subset is equally likely.
    std::vector<double> weights;
    for (int s = 1; s <= c; ++s) {
      weights.push_back(std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) -
                                 std::lgamma(n - s + 1.0)));
    }
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    size = 1 + pick(rng);
  }
  std::vector<int> qubits(static_cast<std::size_t>(n));
  std::iota(qubits.begin(), qubits.end(), 0);
  std::uint32_t mask = 0;
  // Partial Fisher-Yates: the first `size` entries form a uniform subset.
  for (int i = 0; i < size; ++i) {
    std::uniform_int_distribution<int> idx(i, n - 1);
    std::swap(qubits[static_cast<std::size_t>(i)], qubits[static_cast<std::size_t>(idx(rng))]);
    mask |= 1u << qubits[static_cast<std::size_t>(i)];
  }
  return PauliString::x_on(n, mask);
}

double goodness_threshold(int n, int k, int c, double exponent) {
  return std::pow(static_cast<double>(n), exponent * (k - c));
}

GoodnessReport goodness_check(const LocalInstance& inst, double threshold_exponent) {
  const auto& p = inst.params;
  require_dim(p.n <= 20, "goodness_check: n must be <= 20");
  require(inst.alpha.is_z_only(), "goodness_check: alpha must be Z-supported");
  GoodnessReport rep;
  rep.n = p.n;
  rep.k = p.k;
  rep.c = p.c;
  rep.threshold_exponent = threshold_exponent;
  rep.threshold = goodness_threshold(p.n, p.k, p.c, threshold_exponent);
  const auto spikes = subsets_of_size(p.n, p.c);
  rep.num_spikes = spikes.size();
  const auto& g = inst.g.g;
  rep.per_x_count.assign(g.size(), 0);
  parallel_chunks(
      g.size(),
      [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t x = b; x < e; ++x) {
          std::uint32_t count = 0;
          for (std::uint32_t t : spikes) {
            if (std::abs(g[x] - g[x ^ t]) <= rep.threshold) ++count;
          }
          rep.per_x_count[x] = count;
        }
      },
      1024);
  rep.per_x_fraction.resize(g.size());
  double total = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double f = static_cast<double>(rep.per_x_count[x]) / static_cast<double>(spikes.size());
    rep.per_x_fraction[x] = f;
    rep.max_fraction = std::max(rep.max_fraction, f);
    total += f;
  }
  rep.mean_fraction = total / static_cast<double>(g.size());
  return rep;
}

CovarianceInstance covariance_bruteforce(int n, int k, int c, std::vector<std::uint32_t> t_list) {
  require_dim(n <= 20 && k <= 6, "covariance_bruteforce: need n <= 20 and k <= 6");
  require(k >= 0 && k <= n && c >= 1 && c <= n, "covariance_bruteforce: bad (n, k, c)");
  for (std::uint32_t t : t_list) {
    require(popcount(t) == c && (t >> n) == 0,
            "covariance_bruteforce: every T must be a c-subset of the n qubits");
  }
  CovarianceInstance inst;
  inst.n = n;
  inst.k = k;
  inst.c = c;
  inst.sigma2 = local_sigma2(std::max(n, 2), std::max(k, 1));
  const std::size_t d = t_list.size();
  const auto subsets = subsets_of_size(n, k);
  const std::size_t words = (subsets.size() + 63) / 64;

  // odd[i] is the indicator, over S, of |S & T_i| being odd.
  std::vector<std::vector<std::uint64_t>> odd(d, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      if (popcount(subsets[s] & t_list[i]) & 1) odd[i][s / 64] |= std::uint64_t{1} << (s % 64);
    }
  }
  inst.q.assign(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      long long count = 0;
      for (std::size_t w = 0; w < words; ++w) count += popcount(odd[i][w] & odd[j][w]);
      inst.q[i * d + j] = count;
      inst.q[j * d + i] = count;
    }
  }
  inst.t_list = std::move(t_list);
  return inst;
}

std::vector<std::uint32_t> choose_spike_family(int n, int c, std::size_t d_max,
                                               std::uint64_t seed) {
  require(d_max >= 1, "choose_spike_family: d_max must be >= 1");
  auto all = subsets_of_size(n, c);
  if (all.size() <= d_max) return all;
  Rng rng = make_rng(seed, 1);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(d_max);
  std::sort(all.begin(), all.end());
  return all;
}

PsdCheck covariance_psd_check(const CovarianceInstance& inst) {
  const std::size_t d = inst.d();
  require(d >= 1, "covariance_psd_check: empty family");
  require_dim(d <= 512, "covariance_psd_check: d must be <= 512");
  CMatrix q(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(inst(i, j));
    }
  }
  PsdCheck out;
  out.min_eigenvalue = eig_hermitian(HermitianMatrix(std::move(q))).values(0);
  const BinomTable binom(inst.n);
  double power = 1.0;
  for (int i = 1; i < inst.c; ++i) power *= 4.0;
  out.floor = power * binom(inst.n - 2 * inst.c, inst.k - inst.c).convert_to<double>();
  out.pass = out.min_eigenvalue >= out.floor - 1e-6;
  return out;
}

void apply_spiked_evolution(const std::vector<double>& g, std::uint32_t spike_mask, double beta,
                            double t, CVector& state) {
  require(state.size() == static_cast<Eigen::Index>(g.size()),
          "apply_spiked_evolution: state and diagonal sizes differ");
  require(spike_mask != 0 && spike_mask < g.size(),
          "apply_spiked_evolution: spike mask must be a nonempty subset of the qubits");
  const std::uint32_t low = spike_mask & (~spike_mask + 1);
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x & low) continue;  // visit each pair {x, x ^ T} once
    const std::size_t y = x ^ spike_mask;
    const Matrix2c u = block2_exp(g[x], g[y], beta, t);
    const Complex a = state(static_cast<Eigen::Index>(x));
    const Complex b = state(static_cast<Eigen::Index>(y));
    state(static_cast<Eigen::Index>(x)) = u(0, 0) * a + u(0, 1) * b;
    state(static_cast<Eigen::Index>(y)) = u(1, 0) * a + u(1, 1) * b;
  }
}

void apply_diagonal_evolution(const std::vector<double>& g, double t, CVector& state) {
  require(state.size() == static_cast<Eigen::Index>(g.size()),
          "apply_diagonal_evolution: state and diagonal sizes differ");
  for (std::size_t x = 0; x < g.size(); ++x) {
    state(static_cast<Eigen::Index>(x)) *= std::polar(1.0, -g[x] * t);
  }
}

SplitBound per_step_split_bound(const LocalInstance& inst, std::uint32_t spike_mask,
                                const CVector& state, double t, double threshold_exponent,
                                double guard) {
  const auto& p = inst.params;
  require_dim(p.n <= 14, "per_step_split_bound: n must be <= 14");
  const auto& g = inst.g.g;
  require(state.size() == static_cast<Eigen::Index>(g.size()),
          "per_step_split_bound: state has the wrong dimension");
  require(std::abs(state.norm() - 1.0) <= 1e-10, "per_step_split_bound: state is not normalized");
  require(spike_mask != 0 && spike_mask < g.size(),
          "per_step_split_bound: spike mask must be a nonempty subset of the qubits");

  SplitBound out;
  out.threshold = goodness_threshold(p.n, p.k, p.c, threshold_exponent);
  const std::uint32_t low = spike_mask & (~spike_mask + 1);
  double dist2 = 0.0;
  double inside2 = 0.0;
  double min_gap = INFINITY;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x & low) continue;
    const std::size_t y = x ^ spike_mask;
    const Complex a = state(static_cast<Eigen::Index>(x));
    const Complex b = state(static_cast<Eigen::Index>(y));
    Matrix2c diff = -block2_exp(g[x], g[y], p.beta, t);
    diff(0, 0) += std::polar(1.0, -g[x] * t);
    diff(1, 1) += std::polar(1.0, -g[y] * t);
    const Complex da = diff(0, 0) * a + diff(0, 1) * b;
    const Complex db = diff(1, 0) * a + diff(1, 1) * b;
    dist2 += std::norm(da) + std::norm(db);
    const double gap = std::abs(g[x] - g[y]);
    if (gap <= out.threshold) {
      inside2 += std::norm(a) + std::norm(b);
    } else if (std::norm(a) + std::norm(b) > 0.0) {
      min_gap = std::min(min_gap, gap);
    }
  }
  out.exact_dist = std::sqrt(dist2);
  out.projector_norm = std::sqrt(inside2);
  if (std::isfinite(min_gap)) {
    out.min_outside_gap = min_gap;
    out.gap_term = guard * std::min({2.0 * p.beta / min_gap, p.beta * std::abs(t), 1.0});
  }
  out.split_bound = 2.0 * out.projector_norm + out.gap_term;
  out.holds = out.exact_dist <= out.split_bound + 1e-12;
  return out;
}

std::vector<double> spike_averaged_projector(const LocalInstance& inst, SpikeMode mode,
                                             double threshold_exponent) {
  const auto& p = inst.params;
  require_dim(p.n <= 20, "spike_averaged_projector: n must be <= 20");
  const auto family = spike_family(p.n, p.c, mode);
  const double thr = goodness_threshold(p.n, p.k, p.c, threshold_exponent);
  const auto& g = inst.g.g;
  std::vector<std::uint32_t> counts(g.size(), 0);
  for (std::uint32_t t : family) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (std::abs(g[x] - g[x ^ t]) <= thr) ++counts[x];
    }
  }
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    out[x] = static_cast<double>(counts[x]) / static_cast<double>(family.size());
  }
  return out;
}

}  // namespace hamlb
