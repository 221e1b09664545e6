#include "hamlb/worst_case.hpp"

#include <algorithm>
#include <cmath>

#include "hamlb/common.hpp"
#include "hamlb/detail/fwht.hpp"

namespace hamlb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_over_gaps(const std::vector<double>& gaps, double beta, double t) {
  // The block distance depends on the pair (a, b) only through a - b.
  std::vector<double> partial(chunk_count(gaps.size(), 64), 0.0);
  parallel_chunks(
      gaps.size(),
      [&](std::size_t b, std::size_t e, std::size_t w) {
        double best = 0.0;
        for (std::size_t i = b; i < e; ++i) {
          best = std::max(best, block2_diff_norm(gaps[i], 0.0, beta, t));
        }
        partial[w] = best;
      },
      64);
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double WorstCaseInstance::g_max_abs() const {
  double best = 0.0;
  for (double v : g.g) best = std::max(best, std::abs(v));
  return best;
}

CoeffVector WorstCaseInstance::alpha() const {
  require_dim(n <= 20, "WorstCaseInstance::alpha: sparse form limited to n <= 20");
  CoeffVector out(n);
  const auto& c = alpha_dense.coeffs();
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (c[s] != 0.0) out.set(PauliString::z_on(n, static_cast<std::uint32_t>(s)), c[s]);
  }
  return out;
}

WorstCaseInstance build_worst_instance(int n, double delta, double beta, std::uint64_t seed,
                                       SamplerMode mode) {
  require(n >= 2, "build_worst_instance: n must be >= 2");
  require_dim(n <= kMaxQubits, "build_worst_instance: n must be <= 24");
  require(beta >= 0.0 && std::isfinite(beta), "build_worst_instance: beta must be >= 0");

  HardFunction f = sample_hard_function(n - 1, delta, seed, mode);
  const BooleanTable g_table = lift_to_g(f.table);

  WorstCaseInstance inst;
  inst.n = n;
  inst.delta = delta;
  inst.beta = beta;
  inst.seed = seed;
  inst.certificate = f.certificate;
  inst.alpha_dense = wht_forward(g_table);
  inst.spike = PauliString::x_on(n, 1u);

  if (inst.alpha_dense.max_abs() > 1.0) {
    throw CertificationError("build_worst_instance: max |alpha| exceeds 1");
  }
  for (std::size_t s = 0; s < inst.alpha_dense.coeffs().size(); ++s) {
    if (std::abs(inst.alpha_dense[s] - f.fourier[s >> 1]) > 1e-12) {
      throw CertificationError("build_worst_instance: ghat(S) differs from fhat(S >> 1)");
    }
  }

  inst.g.n = n;
  inst.g.g = inst.alpha_dense.coeffs();
  detail::fwht_inplace(inst.g.g);

  const double amp = f.certificate.amplitude;
  const double tol = 1e-9 * std::max(1.0, amp);
  std::vector<double> gaps;
  gaps.reserve(inst.g.g.size() / 2);
  for (std::size_t b = 0; b < inst.g.g.size(); b += 2) {
    const double top = inst.g.g[b];
    const double bottom = inst.g.g[b + 1];
    if (std::abs(top - 2.0 * f.table[b >> 1]) > tol || std::abs(bottom) > tol) {
      throw CertificationError("build_worst_instance: block diagonal is not {2f, 0}");
    }
    gaps.push_back(std::abs(top - bottom));
  }
  std::sort(gaps.begin(), gaps.end());
  // Gaps equal in exact arithmetic may differ in the last bits; merge them.
  std::vector<double> merged;
  for (double v : gaps) {
    if (merged.empty() || v - merged.back() > tol) merged.push_back(v);
  }
  inst.block_gaps = std::move(merged);
  if (inst.block_gaps.front() < 2.0 * amp - tol) {
    throw CertificationError("build_worst_instance: block gap below 2 |f|");
  }
  return inst;
}

double exact_block_distance(const WorstCaseInstance& inst, double t) {
  require(t >= 0.0, "exact_block_distance: t must be >= 0");
  return max_over_gaps(inst.block_gaps, inst.beta, t);
}

double dense_block_distance(const WorstCaseInstance& inst, double t) {
  require_dim(inst.n <= 8, "dense_block_distance: n must be <= 8");
  const HermitianMatrix delta(inst.beta * pauli_matrix(inst.spike));
  return opnorm_diff_exp(inst.g.g, delta, t);
}

double distance_bound(const WorstCaseInstance& inst) {
  return inst.beta * std::exp2(-(0.5 - inst.delta) * inst.n);
}

std::vector<double> default_t_grid(const WorstCaseInstance& inst, int max_j) {
  const double gmax = inst.g_max_abs();
  const double base = kPi / (4.0 * std::max(gmax, 1e-300));
  std::vector<double> grid;
  for (int j = 0; j <= max_j; ++j) grid.push_back(std::ldexp(base, j));
  return grid;
}

SupSearch sup_distance(const WorstCaseInstance& inst, std::vector<double> t_grid, double guard) {
  require(!t_grid.empty(), "sup_distance: empty t grid");
  SupSearch out;
  out.guard = guard;
  out.t_grid = std::move(t_grid);
  out.bound = distance_bound(inst);
  out.max_trivial_excess = -2.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < out.t_grid.size(); ++i) {
    const double t = out.t_grid[i];
    const double d = exact_block_distance(inst, t);
    out.distances.push_back(d);
    out.max_trivial_excess =
        std::max(out.max_trivial_excess, d - std::min(inst.beta * t, 2.0));
    if (d > out.distances[arg]) arg = i;
  }
  out.sup = out.distances[arg];
  out.sup_t = out.t_grid[arg];

  // Golden-section search for a local maximum on the bracketing interval.
  double lo = arg > 0 ? out.t_grid[arg - 1] : 0.0;
  double hi = arg + 1 < out.t_grid.size() ? out.t_grid[arg + 1] : out.t_grid[arg];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = exact_block_distance(inst, x1);
  double f2 = exact_block_distance(inst, x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = exact_block_distance(inst, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = exact_block_distance(inst, x1);
    }
  }
  out.refined_t = f1 >= f2 ? x1 : x2;
  out.refined_distance = std::max(f1, f2);
  out.max_trivial_excess = std::max(
      out.max_trivial_excess, out.refined_distance - std::min(inst.beta * out.refined_t, 2.0));
  if (out.refined_distance > out.sup) {
    out.sup = out.refined_distance;
    out.sup_t = out.refined_t;
  }
  if (out.bound > 0.0) {
    out.max_ratio = out.sup / out.bound;
  } else {
    out.max_ratio = out.sup > 0.0 ? INFINITY : 0.0;
  }
  out.envelope_pass = out.sup <= guard * out.bound;
  out.trivial_pass = out.max_trivial_excess <= 1e-9;
  return out;
}

}  // namespace hamlb
