#include "hamlb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hamlb/common.hpp"

namespace hamlb {

namespace {

constexpr double kPi = 3.14159265358979323846;

CMatrix phases_times(const CMatrix& vectors, const CVector& phases) {
  CMatrix scaled = vectors;
  for (Eigen::Index k = 0; k < scaled.cols(); ++k) scaled.col(k) *= phases(k);
  return scaled * vectors.adjoint();
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "HermitianMatrix: matrix is not square");
  const double scale = std::max(1.0, max_abs(m_));
  for (Eigen::Index j = 0; j < m_.rows(); ++j) {
    for (Eigen::Index k = j; k < m_.cols(); ++k) {
      if (std::abs(m_(j, k) - std::conj(m_(k, j))) > kTolerance * scale) {
        throw PreconditionError("HermitianMatrix: entries (" + std::to_string(j) + "," +
                                std::to_string(k) + ") violate conjugate symmetry");
      }
    }
  }
  // Store the exactly Hermitian part so downstream routines see a clean input.
  for (Eigen::Index j = 0; j < m_.rows(); ++j) {
    m_(j, j) = Complex(m_(j, j).real(), 0.0);
    for (Eigen::Index k = j + 1; k < m_.cols(); ++k) {
      const Complex avg = 0.5 * (m_(j, k) + std::conj(m_(k, j)));
      m_(j, k) = avg;
      m_(k, j) = std::conj(avg);
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                            static_cast<Eigen::Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) {
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = values[j];
  }
  return HermitianMatrix(std::move(m));
}

EigenSystem eig_hermitian(const HermitianMatrix& h) {
  const Eigen::Index n = h.dim();
  require_dim(n <= kMaxDenseDim, "eig_hermitian: dimension " + std::to_string(n) +
                                     " exceeds " + std::to_string(kMaxDenseDim));
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  int sweeps = 0;
  const double fro = a.norm();

  if (n > 1 && fro > 0.0) {
    const double target = 1e-13 * fro;
    for (; sweeps < 100; ++sweeps) {
      double off = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = k + 1; j < n; ++j) off += std::norm(a(j, k));
      }
      if (std::sqrt(2.0 * off) <= target) break;

      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double mag = std::abs(apq);
          if (mag == 0.0) continue;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const Complex phase = apq / mag;
          const double theta = (aqq - app) / (2.0 * mag);
          double tan_r;
          if (std::abs(theta) > 1e150) {
            tan_r = 0.5 / theta;
          } else {
            tan_r = (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          }
          const double c = 1.0 / std::sqrt(1.0 + tan_r * tan_r);
          const double s = tan_r * c;
          // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
          const Complex g_pp = c;
          const Complex g_pq = s;
          const Complex g_qp = -s * std::conj(phase);
          const Complex g_qq = c * std::conj(phase);

          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex akp = a(k, p);
            const Complex akq = a(k, q);
            a(k, p) = akp * g_pp + akq * g_qp;
            a(k, q) = akp * g_pq + akq * g_qq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex apk = a(p, k);
            const Complex aqk = a(q, k);
            a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
            a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = vkp * g_pp + vkq * g_qp;
            v(k, q) = vkp * g_pq + vkq * g_qq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });
  EigenSystem es;
  es.values.resize(n);
  es.vectors.resize(n, n);
  es.sweeps = sweeps;
  for (Eigen::Index j = 0; j < n; ++j) {
    es.values(j) = a(order[j], order[j]).real();
    es.vectors.col(j) = v.col(order[j]);
  }
  return es;
}

CMatrix expm_unitary(const EigenSystem& es, double t) {
  CVector phases(es.values.size());
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    phases(j) = std::polar(1.0, -es.values(j) * t);
  }
  return phases_times(es.vectors, phases);
}

CMatrix expm_unitary(const HermitianMatrix& a, double t) {
  return expm_unitary(eig_hermitian(a), t);
}

CMatrix expm_real(const EigenSystem& es, double s) {
  CVector scale(es.values.size());
  for (Eigen::Index j = 0; j < es.values.size(); ++j) scale(j) = std::exp(s * es.values(j));
  return phases_times(es.vectors, scale);
}

Matrix2c block2_exp(double a, double b, double beta, double t) {
  const double mu = 0.5 * (a + b);
  const double nu = 0.5 * (a - b);
  const double omega = std::hypot(nu, beta);
  const double wt = omega * t;
  double sinc_t;  // sin(omega t) / omega
  if (std::abs(wt) < 1e-6) {
    sinc_t = t * (1.0 - wt * wt / 6.0);
  } else {
    sinc_t = std::sin(wt) / omega;
  }
  const double cw = std::cos(wt);
  const Complex minus_i(0.0, -1.0);
  Matrix2c k;
  k << nu, beta, beta, -nu;
  Matrix2c out = cw * Matrix2c::Identity() + minus_i * sinc_t * k;
  return std::polar(1.0, -mu * t) * out;
}

double block2_diff_norm(double a, double b, double beta, double t) {
  if (beta == 0.0) return 0.0;
  Matrix2c diff = -block2_exp(a, b, beta, t);
  diff(0, 0) += std::polar(1.0, -a * t);
  diff(1, 1) += std::polar(1.0, -b * t);
  return operator_norm(diff);
}

double operator_norm(const Matrix2c& m) {
  // Largest eigenvalue of the Gram matrix [[p, q], [conj(q), r]]; the
  // discriminant is a sum of squares, so near-equal singular values do not cancel.
  const double p = std::norm(m(0, 0)) + std::norm(m(1, 0));
  const double r = std::norm(m(0, 1)) + std::norm(m(1, 1));
  const Complex q = std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
  return std::sqrt(0.5 * (p + r) + std::hypot(0.5 * (p - r), std::abs(q)));
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  CMatrix gram = m.cols() <= m.rows() ? CMatrix(m.adjoint() * m) : CMatrix(m * m.adjoint());
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const EigenSystem es = eig_hermitian(HermitianMatrix(std::move(gram)));
  return std::sqrt(std::max(0.0, es.values(es.values.size() - 1)));
}

double max_abs(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    for (Eigen::Index j = 0; j < m.rows(); ++j) best = std::max(best, std::abs(m(j, k)));
  }
  return best;
}

double unitarity_defect(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

double opnorm_diff_exp(std::span<const double> m_diag, const HermitianMatrix& delta,
                       double t) {
  const auto n = static_cast<Eigen::Index>(m_diag.size());
  require(delta.dim() == n, "opnorm_diff_exp: Delta dimension does not match M");
  require_dim(n <= kMaxDenseDim, "opnorm_diff_exp: dimension guard exceeded");
  const double scale = std::max(1.0, max_abs(delta.matrix()));
  for (Eigen::Index j = 0; j < n; ++j) {
    require(std::abs(delta(j, j)) <= HermitianMatrix::kTolerance * scale,
            "opnorm_diff_exp: Delta must be zero on the diagonal");
  }
  CMatrix h = delta.matrix();
  for (Eigen::Index j = 0; j < n; ++j) h(j, j) = m_diag[static_cast<std::size_t>(j)];
  CMatrix diff = -expm_unitary(HermitianMatrix(std::move(h)), t);
  for (Eigen::Index j = 0; j < n; ++j) {
    diff(j, j) += std::polar(1.0, -m_diag[static_cast<std::size_t>(j)] * t);
  }
  return operator_norm(diff);
}

void PerturbationSweepConfig::validate() const {
  require(dim >= 1, "sweep: dim must be >= 1");
  require_dim(dim <= kMaxDenseDim, "sweep: dim exceeds dense guard");
  require(gap > 0.0, "sweep: D must be > 0");
  require(delta_norm >= 0.0, "sweep: C must be >= 0");
  require(trials >= 1, "sweep: trials must be >= 1");
  require(!t_grid.empty(), "sweep: t_grid must be non-empty");
  for (double t : t_grid) require(t >= 0.0, "sweep: t_grid entries must be >= 0");
}

namespace {

struct SweepTrial {
  std::vector<double> m;
  CMatrix delta;
};

SweepTrial sample_sweep_trial(const PerturbationSweepConfig& cfg, int trial) {
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial));
  std::uniform_real_distribution<double> jitter(0.0, cfg.gap / 4.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  SweepTrial out;
  out.m.resize(static_cast<std::size_t>(cfg.dim));
  double level = jitter(rng);
  for (int j = 0; j < cfg.dim; ++j) {
    out.m[static_cast<std::size_t>(j)] = level;
    level += cfg.gap + jitter(rng);
  }
  out.delta = CMatrix::Zero(cfg.dim, cfg.dim);
  for (int j = 0; j < cfg.dim; ++j) {
    for (int k = j + 1; k < cfg.dim; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      out.delta(j, k) = Complex(re, im);
      out.delta(k, j) = Complex(re, -im);
    }
  }
  if (cfg.dim > 1 && cfg.delta_norm > 0.0) {
    const EigenSystem es = eig_hermitian(HermitianMatrix(out.delta));
    const double norm = std::max(std::abs(es.values(0)), std::abs(es.values(cfg.dim - 1)));
    out.delta *= cfg.delta_norm / norm;
  } else {
    out.delta.setZero();
  }
  return out;
}

}  // namespace

SweepReport perturbation_sweep(const PerturbationSweepConfig& cfg) {
  cfg.validate();
  const std::size_t per_trial = cfg.t_grid.size();
  SweepReport report;
  report.rows.resize(static_cast<std::size_t>(cfg.trials) * per_trial);
  std::vector<double> trial_gaps(static_cast<std::size_t>(cfg.trials),
                                 std::numeric_limits<double>::infinity());

  parallel_chunks(
      static_cast<std::size_t>(cfg.trials),
      [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t trial = begin; trial < end; ++trial) {
          const SweepTrial s = sample_sweep_trial(cfg, static_cast<int>(trial));
          for (std::size_t j = 1; j < s.m.size(); ++j) {
            trial_gaps[trial] = std::min(trial_gaps[trial], s.m[j] - s.m[j - 1]);
          }
          CMatrix h = s.delta;
          for (int j = 0; j < cfg.dim; ++j) h(j, j) = s.m[static_cast<std::size_t>(j)];
          const EigenSystem es = eig_hermitian(HermitianMatrix(std::move(h)));
          for (std::size_t ti = 0; ti < per_trial; ++ti) {
            const double t = cfg.t_grid[ti];
            CMatrix diff = -expm_unitary(es, t);
            for (int j = 0; j < cfg.dim; ++j) {
              diff(j, j) += std::polar(1.0, -s.m[static_cast<std::size_t>(j)] * t);
            }
            const double lhs = operator_norm(diff);
            const double bound =
                std::min({cfg.delta_norm * cfg.dim / cfg.gap, cfg.delta_norm * t, 1.0});
            double ratio = 0.0;
            if (bound > 0.0) {
              ratio = lhs / bound;
            } else if (lhs > 1e-12) {
              ratio = std::numeric_limits<double>::infinity();
            }
            report.rows[trial * per_trial + ti] =
                SweepRow{static_cast<int>(trial), t, cfg.gap, cfg.delta_norm, cfg.dim,
                         lhs, bound, ratio};
          }
        }
      },
      1);

  report.min_observed_gap = *std::min_element(trial_gaps.begin(), trial_gaps.end());
  for (const SweepRow& row : report.rows) {
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.max_trivial_excess = std::max(
        report.max_trivial_excess, row.lhs - std::min(row.delta_norm * row.t, 2.0));
  }
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "trial,t,D,C,dim,lhs,bound,ratio\n";
  char buf[256];
  for (const SweepRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", r.trial, r.t,
                  r.gap, r.delta_norm, r.dim, r.lhs, r.bound, r.ratio);
    out += buf;
  }
  return out;
}

GaussLegendre gauss_legendre(int order) {
  require(order >= 1, "gauss_legendre: order must be >= 1");
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(order));
  gl.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[static_cast<std::size_t>(i)] = x;
    gl.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

double verify_derivative_identity(const HermitianMatrix& a, const HermitianMatrix& v,
                                  double t, const DerivativeCheckOptions& opts) {
  require(a.dim() == v.dim(), "verify_derivative_identity: dimension mismatch");
  require_dim(a.dim() <= 64, "verify_derivative_identity: dim must be <= 64");
  require(opts.h > 0.0, "verify_derivative_identity: step must be > 0");
  const CMatrix& vm = v.matrix();

  auto exp_at = [&](double s) {
    return expm_real(eig_hermitian(HermitianMatrix(a.matrix() + s * vm)), 1.0);
  };
  auto central = [&](double h) { return CMatrix((exp_at(t + h) - exp_at(t - h)) / (2.0 * h)); };
  const CMatrix fd = (4.0 * central(opts.h / 2.0) - central(opts.h)) / 3.0;

  const EigenSystem es = eig_hermitian(HermitianMatrix(a.matrix() + t * vm));
  const int panels = std::max(1, opts.quadrature_nodes / 8);
  const int per_panel = std::max(1, opts.quadrature_nodes / panels);
  const GaussLegendre gl = gauss_legendre(per_panel);
  CMatrix quad = CMatrix::Zero(a.dim(), a.dim());
  for (int p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / panels;
    const double half = 0.5 / panels;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = lo + half * (gl.nodes[i] + 1.0);
      quad += (half * gl.weights[i]) * (expm_real(es, 1.0 - s) * vm * expm_real(es, s));
    }
  }
  return operator_norm(CMatrix(fd - quad));
}

}  // namespace hamlb
