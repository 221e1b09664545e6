#include "hamlb/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hamlb/common.hpp"

namespace hamlb {

namespace {

bool is_spiked(const BlockHamiltonian& b) { return b.beta != 0.0 && b.flip_mask != 0; }

CVector basis_zero(std::size_t dim) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(0) = 1.0;
  return v;
}

// U * state, with the empty matrix standing for the identity.
CVector apply_unitary(const CMatrix& u, const CVector& state, bool state_is_zero) {
  if (u.size() == 0) return state;
  if (state_is_zero) return u.col(0);
  return u * state;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Hamiltonian Hamiltonian::diagonal(int n, std::shared_ptr<const std::vector<double>> g) {
  return spiked(n, std::move(g), 0u, 0.0);
}

Hamiltonian Hamiltonian::spiked(int n, std::shared_ptr<const std::vector<double>> g,
                                std::uint32_t flip_mask, double beta) {
  require(n >= 1, "Hamiltonian: n must be >= 1");
  require_dim(n <= kMaxQubits, "Hamiltonian: n must be <= 24");
  require(g && g->size() == (std::size_t{1} << n), "Hamiltonian: diagonal must have length 2^n");
  require((flip_mask >> n) == 0, "Hamiltonian: flip mask exceeds n qubits");
  return Hamiltonian(n, BlockHamiltonian{std::move(g), flip_mask, beta});
}

Hamiltonian Hamiltonian::dense(HermitianMatrix h) {
  const Eigen::Index dim = h.dim();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  require((Eigen::Index{1} << n) == dim, "Hamiltonian: dense dimension must be a power of two");
  auto eig = std::make_shared<const EigenSystem>(eig_hermitian(h));
  return Hamiltonian(n, DenseHamiltonian{std::make_shared<const HermitianMatrix>(std::move(h)),
                                         std::move(eig)});
}

void Hamiltonian::evolve(CVector& state, double t) const {
  require(state.size() == static_cast<Eigen::Index>(dim()), "Hamiltonian::evolve: wrong state size");
  if (const auto* b = std::get_if<BlockHamiltonian>(&rep_)) {
    if (is_spiked(*b)) {
      apply_spiked_evolution(*b->g, b->flip_mask, b->beta, t, state);
    } else {
      apply_diagonal_evolution(*b->g, t, state);
      if (b->beta != 0.0) state *= std::polar(1.0, -b->beta * t);  // X_{} is the identity
    }
    return;
  }
  const auto& d = std::get<DenseHamiltonian>(rep_);
  CVector coeffs = d.eig->vectors.adjoint() * state;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
    coeffs(j) *= std::polar(1.0, -d.eig->values(j) * t);
  }
  state = d.eig->vectors * coeffs;
}

CMatrix Hamiltonian::matrix() const {
  require_dim(n_ <= kMaxDenseQubits, "Hamiltonian::matrix: n exceeds the dense limit");
  if (const auto* b = std::get_if<BlockHamiltonian>(&rep_)) {
    const auto d = static_cast<Eigen::Index>(dim());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
      m(x, x) = (*b->g)[static_cast<std::size_t>(x)];
      m(x, x ^ static_cast<Eigen::Index>(b->flip_mask)) += b->beta;
    }
    return m;
  }
  return std::get<DenseHamiltonian>(rep_).h->matrix();
}

double step_opnorm(const Hamiltonian& h0, const Hamiltonian& h1, double t) {
  require(h0.n() == h1.n(), "step_opnorm: Hamiltonians act on different qubit counts");
  const auto* b0 = std::get_if<BlockHamiltonian>(&h0.rep());
  const auto* b1 = std::get_if<BlockHamiltonian>(&h1.rep());
  if (b0 && b1 && (b0->g == b1->g || *b0->g == *b1->g)) {
    const auto& g = *b0->g;
    const bool s0 = is_spiked(*b0);
    const bool s1 = is_spiked(*b1);
    const bool diag_ok = (s0 || b0->beta == 0.0) && (s1 || b1->beta == 0.0);
    if (diag_ok && !s0 && !s1) return 0.0;
    if (diag_ok && (!s0 || !s1 || b0->flip_mask == b1->flip_mask)) {
      const std::uint32_t mask = s0 ? b0->flip_mask : b1->flip_mask;
      const std::uint32_t low = mask & (~mask + 1);
      double best = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (x & low) continue;
        const std::size_t y = x ^ mask;
        double d;
        if (!s0 || !s1) {
          d = block2_diff_norm(g[x], g[y], s0 ? b0->beta : b1->beta, t);
        } else {
          d = operator_norm(Matrix2c(block2_exp(g[x], g[y], b0->beta, t) -
                                     block2_exp(g[x], g[y], b1->beta, t)));
        }
        best = std::max(best, d);
      }
      return best;
    }
  }
  require_dim(h0.n() <= kMaxDenseQubits, "step_opnorm: dense route needs n <= 10");
  const CMatrix e0 = expm_unitary(HermitianMatrix(h0.matrix()), t);
  const CMatrix e1 = expm_unitary(HermitianMatrix(h1.matrix()), t);
  return operator_norm(CMatrix(e0 - e1));
}

void RoundSchedule::validate() const {
  require(!rounds.empty(), "RoundSchedule: need at least one round");
  for (const auto& r : rounds) {
    require(std::isfinite(r.t), "RoundSchedule: times must be finite");
    require(allow_time_reversal || r.t >= 0.0,
            "RoundSchedule: negative time needs the time-reversal flag");
  }
}

CMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  require(dim >= 1, "haar_unitary: dim must be >= 1");
  require_dim(dim <= kMaxDenseDim * 8, "haar_unitary: dim too large");
  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix tensor_haar_unitary(int n, std::uint64_t seed) {
  require(n >= 1, "tensor_haar_unitary: n must be >= 1");
  require_dim(n <= 12, "tensor_haar_unitary: n must be <= 12");
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    out = kron(out, haar_unitary(2, mix_seed(seed, static_cast<std::uint64_t>(q))));
  }
  return out;
}

MaterializedSchedule materialize(const RoundSchedule& schedule, int n) {
  schedule.validate();
  const auto dim = Eigen::Index{1} << n;
  MaterializedSchedule out;
  for (const auto& r : schedule.rounds) {
    out.times.push_back(r.t);
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, IdentityUnitary>) {
            out.unitaries.emplace_back();
          } else if constexpr (std::is_same_v<T, HaarUnitary>) {
            out.unitaries.push_back(haar_unitary(dim, spec.seed));
          } else if constexpr (std::is_same_v<T, TensorHaarUnitary>) {
            out.unitaries.push_back(tensor_haar_unitary(n, spec.seed));
          } else {
            require(spec.u.rows() == dim && spec.u.cols() == dim,
                    "materialize: explicit unitary has the wrong dimension");
            require(unitarity_defect(spec.u) <= 1e-8, "materialize: explicit matrix is not unitary");
            out.unitaries.push_back(spec.u);
          }
        },
        r.unitary);
  }
  return out;
}

RoundSchedule random_schedule(std::size_t m, double t_max, UnitaryKind kind, std::uint64_t seed) {
  require(m >= 1, "random_schedule: m must be >= 1");
  require(t_max >= 0.0, "random_schedule: t_max must be >= 0");
  Rng rng = make_rng(seed, 0);
  std::uniform_real_distribution<double> time(0.0, t_max);
  RoundSchedule s;
  for (std::size_t j = 0; j < m; ++j) {
    Round r;
    r.t = time(rng);
    const std::uint64_t useed = mix_seed(seed, j + 1);
    switch (kind) {
      case UnitaryKind::identity: r.unitary = IdentityUnitary{}; break;
      case UnitaryKind::haar: r.unitary = HaarUnitary{useed}; break;
      case UnitaryKind::tensor_haar: r.unitary = TensorHaarUnitary{useed}; break;
    }
    s.rounds.push_back(std::move(r));
  }
  return s;
}

Advantage optimal_advantage(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), "optimal_advantage: dimension mismatch");
  require(std::abs(a.norm() - 1.0) <= 1e-8 && std::abs(b.norm() - 1.0) <= 1e-8,
          "optimal_advantage: states must be unit norm");
  Advantage out;
  const double overlap2 = std::min(1.0, std::norm(a.dot(b)));
  out.helstrom = 0.5 * std::sqrt(1.0 - overlap2);
  out.euclidean_half = 0.5 * (a - b).norm();
  return out;
}

GameTranscript run_game(const Hamiltonian& h0, const Hamiltonian& h1,
                        const MaterializedSchedule& schedule, const GameOptions& opts) {
  require(h0.n() == h1.n(), "run_game: Hamiltonians act on different qubit counts");
  require(schedule.m() >= 1 && schedule.unitaries.size() == schedule.m(),
          "run_game: malformed schedule");
  const std::size_t dim = h0.dim();
  for (const auto& u : schedule.unitaries) {
    require(u.size() == 0 || (u.rows() == static_cast<Eigen::Index>(dim) && u.cols() == u.rows()),
            "run_game: unitary dimension does not match the Hamiltonians");
  }
  const std::size_t m = schedule.m();
  GameTranscript tr;
  tr.times = schedule.times;
  auto track = [&](const CVector& v) {
    tr.max_norm_defect = std::max(tr.max_norm_defect, std::abs(v.norm() - 1.0));
  };

  // post[k]: state after k unspiked rounds.
  std::vector<CVector> post;
  post.reserve(opts.explicit_hybrids ? m + 1 : 1);
  CVector cur = basis_zero(dim);
  if (opts.explicit_hybrids) post.push_back(cur);
  for (std::size_t k = 0; k < m; ++k) {
    const CVector pre = apply_unitary(schedule.unitaries[k], cur, k == 0);
    track(pre);
    CVector a = pre;
    h0.evolve(a, schedule.times[k]);
    CVector b = pre;
    h1.evolve(b, schedule.times[k]);
    track(a);
    track(b);
    tr.per_step_dist.push_back((a - b).norm());
    cur = std::move(a);
    if (opts.explicit_hybrids) post.push_back(cur);
  }
  tr.final_unspiked = cur;

  cur = basis_zero(dim);
  for (std::size_t k = 0; k < m; ++k) {
    cur = apply_unitary(schedule.unitaries[k], cur, k == 0);
    h1.evolve(cur, schedule.times[k]);
    track(cur);
  }
  tr.final_spiked = cur;

  tr.total_dist = (tr.final_unspiked - tr.final_spiked).norm();
  tr.sum_delta = std::accumulate(tr.per_step_dist.begin(), tr.per_step_dist.end(), 0.0);
  tr.hybrid_chain_holds = tr.total_dist <= tr.sum_delta + 1e-9;

  if (opts.explicit_hybrids) {
    // phi_k: the first k rounds unspiked, the remaining m - k spiked.
    std::vector<CVector> phi(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      CVector s = post[k];
      for (std::size_t j = k; j < m; ++j) {
        s = apply_unitary(schedule.unitaries[j], s, false);
        h1.evolve(s, schedule.times[j]);
      }
      track(s);
      phi[k] = std::move(s);
    }
    tr.hybrid_discrepancy = std::max((phi[m] - tr.final_unspiked).norm(),
                                     (phi[0] - tr.final_spiked).norm());
    for (std::size_t k = 1; k <= m; ++k) {
      const double d = (phi[k] - phi[k - 1]).norm();
      tr.per_step_dist_explicit.push_back(d);
      tr.hybrid_discrepancy = std::max(tr.hybrid_discrepancy, std::abs(d - tr.per_step_dist[k - 1]));
    }
  }

  if (opts.compute_bounds) {
    for (std::size_t k = 0; k < m; ++k) {
      const double bound = step_opnorm(h0, h1, schedule.times[k]);
      tr.per_step_bound.push_back(bound);
      if (tr.per_step_dist[k] > bound + 1e-9) tr.domination_holds = false;
    }
  }
  tr.norms_hold = tr.max_norm_defect <= 1e-10;
  tr.advantage = optimal_advantage(tr.final_unspiked, tr.final_spiked);
  return tr;
}

GameTranscript run_game(const Hamiltonian& h0, const Hamiltonian& h1,
                        const RoundSchedule& schedule, const GameOptions& opts) {
  return run_game(h0, h1, materialize(schedule, h0.n()), opts);
}

namespace {

// U <- U (I (x) G) with G a 4x4 unitary on qubits (q1, q2); G's row/column
// index is bit(q1) + 2 bit(q2).
void right_multiply_pair(CMatrix& u, const Eigen::Matrix4cd& gate, int q1, int q2) {
  const Eigen::Index dim = u.cols();
  const Eigen::Index m1 = Eigen::Index{1} << q1;
  const Eigen::Index m2 = Eigen::Index{1} << q2;
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & (m1 | m2)) continue;
    const Eigen::Index cols[4] = {base, base | m1, base | m2, base | m1 | m2};
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      Complex in[4];
      for (int j = 0; j < 4; ++j) in[j] = u(r, cols[j]);
      for (int j = 0; j < 4; ++j) {
        Complex acc = 0.0;
        for (int i = 0; i < 4; ++i) acc += in[i] * gate(i, j);
        u(r, cols[j]) = acc;
      }
    }
  }
}

Eigen::Matrix4cd random_pair_gate(Rng& rng, double step) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix k(4, 4);
  for (int i = 0; i < 4; ++i) {
    k(i, i) = normal(rng);
    for (int j = i + 1; j < 4; ++j) {
      k(i, j) = Complex(normal(rng), normal(rng));
      k(j, i) = std::conj(k(i, j));
    }
  }
  k /= k.norm();
  return expm_unitary(HermitianMatrix(k), -step * std::abs(normal(rng)));
}

struct Candidate {
  MaterializedSchedule sched;
  double value = 0.0;
};

}  // namespace

SearchResult adversarial_schedule_search(const WorstCaseInstance& inst, const SearchOptions& opts) {
  require_dim(inst.n <= 10, "adversarial_schedule_search: n must be <= 10");
  require(opts.m >= 1 && opts.restarts >= 1 && opts.iterations >= 0,
          "adversarial_schedule_search: need m >= 1, restarts >= 1, iterations >= 0");
  const int n = inst.n;
  auto g = std::make_shared<const std::vector<double>>(inst.g.g);
  const Hamiltonian h0 = Hamiltonian::diagonal(n, g);
  const Hamiltonian h1 = Hamiltonian::spiked(n, g, inst.spike.x_mask(), inst.beta);

  SearchResult res;
  res.m = opts.m;
  const auto grid = default_t_grid(inst);
  res.t_min = opts.t_min > 0.0 ? opts.t_min : grid.front();
  res.t_max = opts.t_max > 0.0 ? opts.t_max : grid.back();
  require(res.t_max >= res.t_min, "adversarial_schedule_search: empty time range");
  const double log_lo = std::log(res.t_min);
  const double log_hi = std::log(res.t_max);
  const GameOptions fast{false, false};
  auto evaluate = [&](const MaterializedSchedule& s) { return run_game(h0, h1, s, fast).total_dist; };

  Candidate previous;
  for (std::size_t depth = 1; depth <= opts.m; ++depth) {
    Candidate best_here;
    best_here.value = -1.0;
    res.per_restart_best.clear();
    for (int r = 0; r < opts.restarts; ++r) {
      Rng rng = make_rng(mix_seed(opts.seed, depth), static_cast<std::uint64_t>(r));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      Candidate cand;
      if (r == 0 && depth > 1) {
        cand.sched.unitaries.emplace_back();
        cand.sched.times.push_back(0.0);
        for (std::size_t j = 0; j < previous.sched.m(); ++j) {
          cand.sched.unitaries.push_back(previous.sched.unitaries[j]);
          cand.sched.times.push_back(previous.sched.times[j]);
        }
      } else {
        for (std::size_t j = 0; j < depth; ++j) {
          cand.sched.times.push_back(std::exp(log_lo + (log_hi - log_lo) * unit(rng)));
          cand.sched.unitaries.push_back(opts.search_unitaries
                                             ? tensor_haar_unitary(n, rng())
                                             : CMatrix());
        }
      }
      cand.value = evaluate(cand.sched);

      for (int it = 0; it < opts.iterations; ++it) {
        const std::size_t j = static_cast<std::size_t>(unit(rng) * static_cast<double>(depth)) %
                              depth;
        const bool move_unitary = opts.search_unitaries && n >= 2 && unit(rng) < 0.5;
        if (move_unitary) {
          CMatrix& u = cand.sched.unitaries[j];
          if (u.size() == 0) u = CMatrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
          const int q1 = static_cast<int>(unit(rng) * n) % n;
          int q2 = static_cast<int>(unit(rng) * (n - 1)) % (n - 1);
          if (q2 >= q1) ++q2;
          const Eigen::Matrix4cd gate = random_pair_gate(rng, 0.3);
          const CMatrix saved = u;
          right_multiply_pair(u, gate, q1, q2);
          const double v = evaluate(cand.sched);
          if (v > cand.value) {
            cand.value = v;
          } else {
            u = saved;
          }
        } else {
          const double old = cand.sched.times[j];
          double proposal;
          if (old <= 0.0) {
            proposal = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
          } else {
            proposal = std::clamp(std::exp(std::log(old) + 0.7 * normal(rng)), res.t_min, res.t_max);
          }
          cand.sched.times[j] = proposal;
          const double v = evaluate(cand.sched);
          if (v > cand.value) {
            cand.value = v;
          } else {
            cand.sched.times[j] = old;
          }
        }
      }
      res.per_restart_best.push_back(cand.value);
      if (cand.value > best_here.value) best_here = cand;
    }
    res.best_by_depth.push_back(best_here.value);
    previous = std::move(best_here);
  }

  res.best = run_game(h0, h1, previous.sched, GameOptions{true, true});
  double bound_sum = 0.0;
  for (double b : res.best.per_step_bound) bound_sum += b;
  res.bounds_hold = res.best.total_dist <= bound_sum + 1e-9;
  for (std::size_t j = 0; j < previous.sched.m(); ++j) {
    Round round;
    round.t = previous.sched.times[j];
    if (previous.sched.unitaries[j].size() == 0) {
      round.unitary = IdentityUnitary{};
    } else {
      round.unitary = ExplicitUnitary{previous.sched.unitaries[j]};
    }
    res.best_schedule.rounds.push_back(std::move(round));
  }
  return res;
}

AverageGameReport average_case_game(const LocalInstance& inst, const RoundSchedule& schedule,
                                    const AverageGameOptions& opts) {
  const auto& p = inst.params;
  require_dim(p.n <= 14, "average_case_game: n must be <= 14");
  require(opts.samples >= 2, "average_case_game: need at least two spike samples");
  const MaterializedSchedule ms = materialize(schedule, p.n);
  const std::size_t m = ms.m();
  const std::size_t dim = std::size_t{1} << p.n;
  const auto& g = inst.g.g;

  AverageGameReport rep;
  rep.m = m;
  rep.samples = opts.samples;
  rep.threshold_exponent = opts.threshold_exponent;
  rep.threshold = goodness_threshold(p.n, p.k, p.c, opts.threshold_exponent);

  // Unspiked trajectory: inputs to each round, and the final state.
  std::vector<CVector> pre(m);
  CVector cur = basis_zero(dim);
  for (std::size_t k = 0; k < m; ++k) {
    pre[k] = apply_unitary(ms.unitaries[k], cur, k == 0);
    cur = pre[k];
    apply_diagonal_evolution(g, ms.times[k], cur);
  }
  const CVector final_unspiked = cur;

  const std::vector<double> averaged = spike_averaged_projector(inst, opts.mode, opts.threshold_exponent);
  if (opts.mode == SpikeMode::uniform_exactly_c) {
    const GoodnessReport good = goodness_check(inst, opts.threshold_exponent);
    rep.projector_matches_goodness = true;
    for (std::size_t x = 0; x < dim; ++x) {
      const double diff = std::abs(good.per_x_fraction[x] - averaged[x]);
      rep.max_fraction_difference = std::max(rep.max_fraction_difference, diff);
      if (good.per_x_fraction[x] != averaged[x]) rep.projector_matches_goodness = false;
    }
  } else {
    rep.projector_matches_goodness = true;
  }

  const auto family = spike_family(p.n, p.c, opts.mode);
  for (std::size_t k = 0; k < m; ++k) {
    double quad = 0.0;
    for (std::size_t x = 0; x < dim; ++x) quad += averaged[x] * std::norm(pre[k](static_cast<Eigen::Index>(x)));
    double exact = 0.0;
    for (std::uint32_t t : family) {
      double in = 0.0;
      for (std::size_t x = 0; x < dim; ++x) {
        if (std::abs(g[x] - g[x ^ t]) <= rep.threshold) in += std::norm(pre[k](static_cast<Eigen::Index>(x)));
      }
      exact += in;
    }
    exact /= static_cast<double>(family.size());
    rep.projector_quadratic.push_back(quad);
    rep.projector_exact.push_back(exact);
    rep.max_projector_discrepancy = std::max(rep.max_projector_discrepancy, std::abs(exact - quad));
  }

  rep.mean_delta.assign(m, 0.0);
  rep.mean_split_bound.assign(m, 0.0);
  rep.projector_sampled.assign(m, 0.0);
  std::vector<double> totals;
  totals.reserve(opts.samples);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    const std::uint32_t mask =
        sample_spike(p.n, p.c, opts.mode, mix_seed(opts.seed, s)).x_mask();
    for (std::size_t k = 0; k < m; ++k) {
      const SplitBound sb = per_step_split_bound(inst, mask, pre[k], ms.times[k],
                                                 opts.threshold_exponent, opts.guard);
      rep.mean_delta[k] += sb.exact_dist;
      rep.mean_split_bound[k] += sb.split_bound;
      rep.projector_sampled[k] += sb.projector_norm * sb.projector_norm;
      if (!sb.holds) rep.split_bounds_hold = false;
    }
    CVector spiked = basis_zero(dim);
    for (std::size_t k = 0; k < m; ++k) {
      spiked = apply_unitary(ms.unitaries[k], spiked, k == 0);
      apply_spiked_evolution(g, mask, p.beta, ms.times[k], spiked);
    }
    totals.push_back((spiked - final_unspiked).norm());
  }
  const double count = static_cast<double>(opts.samples);
  for (std::size_t k = 0; k < m; ++k) {
    rep.mean_delta[k] /= count;
    rep.mean_split_bound[k] /= count;
    rep.projector_sampled[k] /= count;
  }
  rep.mean_total = std::accumulate(totals.begin(), totals.end(), 0.0) / count;
  double var = 0.0;
  for (double v : totals) var += (v - rep.mean_total) * (v - rep.mean_total);
  var /= (count - 1.0);
  rep.se_total = std::sqrt(var / count);
  if (p.beta > 0.0) {
    rep.envelope = *std::max_element(rep.mean_delta.begin(), rep.mean_delta.end()) / p.beta;
  }
  rep.bound_value = static_cast<double>(m) * p.beta * rep.envelope;
  rep.bound_holds = rep.mean_total <= rep.bound_value + 3.0 * rep.se_total + 1e-12;
  return rep;
}

}  // namespace hamlb
