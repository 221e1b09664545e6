#include "hamlb/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hamlb/combinatorics.hpp"
#include "hamlb/common.hpp"
#include "hamlb/game.hpp"
#include "hamlb/local_case.hpp"
#include "hamlb/worst_case.hpp"

#ifndef HAMLB_GIT_DESCRIBE
#define HAMLB_GIT_DESCRIBE "unknown"
#endif
#ifndef HAMLB_VERSION
#define HAMLB_VERSION "0.0.0"
#endif

namespace hamlb {

using Json = nlohmann::ordered_json;

std::string version_string() { return HAMLB_VERSION; }
std::string git_describe() { return HAMLB_GIT_DESCRIBE; }

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared output settings.
struct OutputOptions {
  std::string out_path;
  std::string csv_path;
  std::string format = "json";
  std::string config_path;
  bool quick = false;
};

struct Report {
  Json body;
  std::string csv;
  bool ok = true;
  std::vector<std::string> failures;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("not an integer list: " + text);
    }
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Writes config values into options that were not given on the command line.
void apply_config(CLI::App* sub, const Json& config) {
  const Json* scoped = &config;
  if (config.contains(sub->get_name()) && config[sub->get_name()].is_object()) {
    scoped = &config[sub->get_name()];
  }
  for (CLI::Option* opt : sub->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    std::string alt = name;
    std::replace(alt.begin(), alt.end(), '-', '_');
    const Json* value = nullptr;
    for (const Json* scope : {scoped, &config}) {
      if (scope->contains(name)) value = &(*scope)[name];
      else if (scope->contains(alt)) value = &(*scope)[alt];
      if (value) break;
    }
    if (!value || value->is_object()) continue;
    std::string text;
    if (value->is_string()) {
      text = value->get<std::string>();
    } else if (value->is_array()) {
      for (const auto& item : *value) {
        if (!text.empty()) text += ",";
        text += item.is_string() ? item.get<std::string>() : item.dump();
      }
    } else {
      text = value->dump();
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

Json meta(const std::string& command, std::uint64_t seed, Json params) {
  Json m;
  m["tool"] = "hamlb";
  m["command"] = command;
  m["version"] = version_string();
  m["git_describe"] = git_describe();
  m["seed"] = seed;
  m["parameters"] = std::move(params);
  m["timestamp"] = utc_timestamp();
  return m;
}

void require_given(CLI::App* sub, const std::string& name) {
  if (sub->get_option(name)->count() == 0) throw UsageError(name + " is required");
}

// ---------------------------------------------------------------- worst-instance

struct WorstArgs {
  int n = 0;
  double delta = 0.1;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string sampler = "bent";
  int grid_max_j = 40;
  double guard = kGuard;
  bool dense_check = false;
  bool strict_envelope = false;
};

Report cmd_worst_instance(const WorstArgs& a, const OutputOptions& o) {
  const int max_j = o.quick ? std::min(a.grid_max_j, 20) : a.grid_max_j;
  if (o.quick && a.n > 12) throw UsageError("--quick caps --n at 12");
  require(max_j >= 0, "--grid-max-j must be >= 0");
  const SamplerMode mode = a.sampler == "independent" ? SamplerMode::independent : SamplerMode::bent;
  const WorstCaseInstance inst = build_worst_instance(a.n, a.delta, a.beta, a.seed, mode);
  const SupSearch sup = sup_distance(inst, default_t_grid(inst, max_j), a.guard);

  Report rep;
  Json& b = rep.body;
  b["meta"] = meta("worst-instance", a.seed,
                   {{"n", a.n}, {"delta", a.delta}, {"beta", a.beta}, {"sampler", a.sampler},
                    {"grid_max_j", max_j}, {"guard", a.guard}, {"quick", o.quick}});
  b["n"] = a.n;
  b["delta"] = a.delta;
  b["beta"] = a.beta;
  b["seed"] = a.seed;
  b["t_grid"] = sup.t_grid;
  b["distances"] = sup.distances;
  b["refined_t"] = sup.refined_t;
  b["refined_distance"] = sup.refined_distance;
  b["sup"] = sup.sup;
  b["sup_t"] = sup.sup_t;
  b["sup_method"] = "finite surrogate: geometric grid plus golden-section refinement";
  b["bound"] = sup.bound;
  b["max_ratio"] = sup.max_ratio;
  b["guard"] = a.guard;
  b["envelope_pass"] = sup.envelope_pass;
  b["trivial_pass"] = sup.trivial_pass;
  b["max_trivial_excess"] = sup.max_trivial_excess;
  b["alpha_max_abs"] = inst.alpha_max_abs();
  b["distinct_block_gaps"] = inst.block_gaps.size();
  b["certificate"] = {{"amplitude", inst.certificate.amplitude},
                      {"max_fourier", inst.certificate.max_fourier},
                      {"attempts", inst.certificate.attempts},
                      {"sampler", a.sampler}};
  rep.check(inst.alpha_max_abs() <= 1.0, "max |alpha| <= 1");
  rep.check(sup.trivial_pass, "distance <= min(beta t, 2)");
  if (a.strict_envelope) rep.check(sup.envelope_pass, "sup <= guard * bound");

  if (a.dense_check || inst.n <= 8) {
    if (inst.n > 8) throw UsageError("--dense-check needs --n <= 8");
    double worst = 0.0;
    int compared = 0;
    for (double t : sup.t_grid) {
      if (t * inst.g_max_abs() > kDenseCompareScale) continue;
      worst = std::max(worst, std::abs(exact_block_distance(inst, t) - dense_block_distance(inst, t)));
      ++compared;
    }
    b["dense_check"] = {{"max_abs_diff", worst}, {"grid_points", compared},
                        {"max_t_times_norm", kDenseCompareScale}};
    rep.check(worst <= 1e-9, "block and dense distances agree to 1e-9");
  }

  std::ostringstream csv;
  csv << "t,distance,bound,ratio\n";
  for (std::size_t i = 0; i < sup.t_grid.size(); ++i) {
    const double ratio = sup.bound > 0 ? sup.distances[i] / sup.bound : 0.0;
    csv << fmt(sup.t_grid[i]) << ',' << fmt(sup.distances[i]) << ',' << fmt(sup.bound) << ','
        << fmt(ratio) << '\n';
  }
  rep.csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- local-instance

struct LocalArgs {
  int n = 0;
  int k = 3;
  int c = 2;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string support = "exactly-k";
  double threshold_exponent = 0.1;
  double split_exponent = -0.1;
  int psd_d = 128;
  int per_step = 5;
  double t = 1.0;
};

Report cmd_local_instance(const LocalArgs& a, const OutputOptions& o) {
  if (o.quick && a.n > 12) throw UsageError("--quick caps --n at 12");
  LocalParams p;
  p.n = a.n;
  p.k = a.k;
  p.c = a.c;
  p.beta = a.beta;
  p.seed = a.seed;
  p.degree = a.support == "up-to-k" ? SupportDegree::up_to_k : SupportDegree::exactly_k;
  p.validate();
  require_dim(a.n <= 20, "local-instance: n must be <= 20");
  require(a.psd_d >= 1 && a.per_step >= 0, "local-instance: --psd-d >= 1 and --per-step >= 0");

  const LocalInstance inst = sample_local_instance(p);
  const GoodnessReport good = goodness_check(inst, a.threshold_exponent);

  Report rep;
  Json& b = rep.body;
  b["meta"] = meta("local-instance", a.seed,
                   {{"n", a.n}, {"k", a.k}, {"c", a.c}, {"beta", a.beta}, {"support", a.support},
                    {"threshold_exponent", a.threshold_exponent},
                    {"split_exponent", a.split_exponent}, {"psd_d", a.psd_d},
                    {"per_step", a.per_step}, {"t", a.t}, {"quick", o.quick}});
  b["params"] = {{"n", a.n}, {"k", a.k}, {"c", a.c}, {"beta", a.beta}, {"support", a.support},
                 {"sigma2", inst.sigma2}, {"terms", inst.alpha.size()}};
  b["alpha_max_abs"] = inst.alpha_max_abs;
  b["max_goodness_fraction"] = good.max_fraction;
  b["mean_goodness_fraction"] = good.mean_fraction;
  b["goodness_threshold"] = {{"exponent", a.threshold_exponent}, {"value", good.threshold}};

  if (a.k <= 6) {
    const auto family = choose_spike_family(a.n, a.c, static_cast<std::size_t>(a.psd_d), a.seed);
    const CovarianceInstance cov = covariance_bruteforce(a.n, a.k, a.c, family);
    const PsdCheck psd = covariance_psd_check(cov);
    const BinomTable binom(a.n);
    bool matches_z = true;
    bool symmetric = true;
    for (std::size_t i = 0; i < cov.d(); ++i) {
      for (std::size_t j = 0; j < cov.d(); ++j) {
        if (cov(i, j) != cov(j, i)) symmetric = false;
        const int inter = popcount(cov.t_list[i] & cov.t_list[j]);
        const BigInt z = z_count({a.n, a.k, a.c, inter}, ZMethod::partition_sum, binom);
        if (BigInt(cov(i, j)) != z) matches_z = false;
      }
    }
    b["psd"] = {{"d", cov.d()}, {"min_eig", psd.min_eigenvalue}, {"floor", psd.floor},
                {"pass", psd.pass}, {"q_symmetric", symmetric}, {"q_matches_z", matches_z}};
    rep.check(symmetric, "Q symmetric");
    rep.check(matches_z, "Q_ij = z_{|T_i & T_j|}");
    rep.check(psd.pass, "min eig(Q) >= 4^{c-1} C(n-2c, k-c)");
  }

  std::ostringstream csv;
  csv << "spike_mask,t,exact_dist,projector_norm,gap_term,split_bound,holds\n";
  Json steps = Json::array();
  if (a.n <= 14) {
    for (int s = 0; s < a.per_step; ++s) {
      const std::uint64_t sub = mix_seed(a.seed, 1000 + static_cast<std::uint64_t>(s));
      const std::uint32_t mask =
          sample_spike(a.n, a.c, SpikeMode::uniform_exactly_c, sub).x_mask();
      Rng rng = make_rng(sub, 1);
      std::normal_distribution<double> normal(0.0, 1.0);
      CVector psi(Eigen::Index{1} << a.n);
      for (Eigen::Index x = 0; x < psi.size(); ++x) psi(x) = Complex(normal(rng), normal(rng));
      psi.normalize();
      const SplitBound sb = per_step_split_bound(inst, mask, psi, a.t, a.split_exponent);
      steps.push_back({{"spike_mask", mask}, {"t", a.t}, {"exact_dist", sb.exact_dist},
                       {"projector_norm", sb.projector_norm}, {"gap_term", sb.gap_term},
                       {"split_bound", sb.split_bound}, {"holds", sb.holds}});
      csv << mask << ',' << fmt(a.t) << ',' << fmt(sb.exact_dist) << ',' << fmt(sb.projector_norm)
          << ',' << fmt(sb.gap_term) << ',' << fmt(sb.split_bound) << ',' << (sb.holds ? 1 : 0)
          << '\n';
      rep.check(sb.holds, "per-step split bound holds");
    }
  }
  b["per_step"] = steps;
  rep.csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- verify-identities

struct IdentityArgs {
  int max_n = 16;
  int max_l = 64;
  int max_c = 4;
};

Report cmd_verify_identities(const IdentityArgs& a, const OutputOptions& o) {
  const int max_n = o.quick ? std::min(a.max_n, 12) : a.max_n;
  require(max_n >= 0 && max_n <= kMaxPartitionN, "--max-n must be in [0, 1000]");
  require(a.max_l >= 0 && a.max_l <= 1000, "--max-l must be in [0, 1000]");
  require(a.max_c >= 1 && 2 * a.max_c <= std::max(max_n, 2), "--max-c must be in [1, max-n/2]");
  const IdentitySweepReport sweep = run_identity_sweep(a.max_l, max_n, a.max_c);

  Report rep;
  Json& b = rep.body;
  b["meta"] = meta("verify-identities", 0,
                   {{"max_n", max_n}, {"max_l", a.max_l}, {"max_c", a.max_c}, {"quick", o.quick}});
  b["simple"] = {{"checked", sweep.simple_checked}, {"failed", sweep.simple_failed}};
  b["complex"] = {{"checked", sweep.complex_checked},
                  {"failed", sweep.complex_failed},
                  {"checked_r0", sweep.complex_checked_r0},
                  {"failed_r0", sweep.complex_failed_r0},
                  {"method_disagreements", sweep.method_disagreements}};
  b["reconstruction_failed"] = sweep.reconstruction_failed;
  Json failures = Json::array();
  for (const auto& f : sweep.complex_failures) {
    failures.push_back({{"n", f.n}, {"k", f.k}, {"c", f.c}, {"r", f.r},
                        {"lhs", f.lhs.str()}, {"rhs", to_string(f.rhs)}});
  }
  b["complex_failures"] = failures;
  Json thresholds = Json::array();
  std::ostringstream csv;
  csv << "k,c,n_max,min_n,violating_n\n";
  for (const auto& t : sweep.thresholds) {
    std::string viol;
    for (int v : t.violating_n) viol += (viol.empty() ? "" : ";") + std::to_string(v);
    csv << t.k << ',' << t.c << ',' << t.n_max << ',' << t.min_n << ',' << viol << '\n';
    thresholds.push_back({{"k", t.k}, {"c", t.c}, {"n_max", t.n_max}, {"min_n", t.min_n},
                          {"violating_n", t.violating_n}});
  }
  b["nonnegativity"] = thresholds;
  rep.check(sweep.simple_failed == 0, "simple identity");
  rep.check(sweep.complex_failed == 0, "complex identity");
  rep.check(sweep.method_disagreements == 0, "z_t enumeration matches partition sum");
  rep.check(sweep.reconstruction_failed == 0, "z_l reconstruction");
  rep.csv = csv.str();
  return rep;
}

std::string identity_table(const Report& rep) {
  const Json& b = rep.body;
  std::ostringstream os;
  auto row = [&](const std::string& name, long checked, long failed) {
    os << std::left << std::setw(34) << name << std::right << std::setw(8) << checked
       << std::setw(8) << failed << "  " << (failed == 0 ? "PASS" : "FAIL") << '\n';
  };
  os << std::left << std::setw(34) << "check" << std::right << std::setw(8) << "cases"
     << std::setw(8) << "failed" << "  status\n";
  row("simple alternating identity", b["simple"]["checked"], b["simple"]["failed"]);
  row("complex identity", b["complex"]["checked"], b["complex"]["failed"]);
  row("complex identity, r >= 1",
      b["complex"]["checked"].get<long>() - b["complex"]["checked_r0"].get<long>(),
      b["complex"]["failed"].get<long>() - b["complex"]["failed_r0"].get<long>());
  row("z_t enumeration vs partition sum", b["complex"]["checked"],
      b["complex"]["method_disagreements"]);
  row("z_l reconstruction", b["complex"]["checked"], b["reconstruction_failed"]);
  int shown = 0;
  for (const auto& f : b["complex_failures"]) {
    if (shown++ == 10) {
      os << "  ... " << b["complex_failures"].size() - 10 << " more\n";
      break;
    }
    os << "  failure n=" << f["n"] << " k=" << f["k"] << " c=" << f["c"] << " r=" << f["r"]
       << ": lhs=" << f["lhs"].get<std::string>() << " rhs=" << f["rhs"].get<std::string>() << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- matrix-bound-sweep

struct SweepArgs {
  int dim = 32;
  double gap = 1000.0;
  double delta_norm = 1.0;
  int trials = 100;
  std::uint64_t seed = 0;
  double t_min = 1e-3;
  double t_max = 1e3;
  int t_points = 25;
  double guard = kGuard;
  bool strict_envelope = false;
};

Report cmd_matrix_bound_sweep(const SweepArgs& a, const OutputOptions& o) {
  require(a.t_points >= 1 && a.t_min > 0.0 && a.t_max >= a.t_min,
          "--t-points >= 1 and 0 < --t-min <= --t-max");
  PerturbationSweepConfig cfg;
  cfg.dim = a.dim;
  cfg.gap = a.gap;
  cfg.delta_norm = a.delta_norm;
  cfg.trials = o.quick ? std::min(a.trials, 20) : a.trials;
  cfg.seed = a.seed;
  const int points = o.quick ? std::min(a.t_points, 10) : a.t_points;
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    cfg.t_grid.push_back(a.t_min * std::pow(a.t_max / a.t_min, frac));
  }
  cfg.validate();
  const SweepReport sweep = perturbation_sweep(cfg);

  Report rep;
  Json& b = rep.body;
  b["meta"] = meta("matrix-bound-sweep", a.seed,
                   {{"dim", a.dim}, {"D", a.gap}, {"C", a.delta_norm}, {"trials", cfg.trials},
                    {"t_min", a.t_min}, {"t_max", a.t_max}, {"t_points", points},
                    {"guard", a.guard}, {"quick", o.quick}});
  b["rows"] = sweep.rows.size();
  b["max_ratio"] = sweep.max_ratio;
  b["guard"] = a.guard;
  b["envelope_pass"] = sweep.max_ratio <= a.guard;
  b["max_trivial_excess"] = sweep.max_trivial_excess;
  b["min_observed_gap"] = sweep.min_observed_gap;
  rep.check(sweep.max_trivial_excess <= 1e-9, "opnorm <= min(C t, 2)");
  rep.check(sweep.min_observed_gap >= a.gap, "sampled gaps >= D");
  if (a.strict_envelope) rep.check(sweep.max_ratio <= a.guard, "ratio <= guard");
  rep.csv = sweep_csv(sweep);
  return rep;
}

// ---------------------------------------------------------------- discrimination-game

struct GameArgs {
  std::string family = "worst";
  int n = 0;
  int k = 3;
  int c = 2;
  std::size_t m = 20;
  double beta = 1.0;
  double delta = 0.1;
  std::uint64_t seed = 0;
  double t_max = 4.0;
  std::string unitaries = "haar";
  std::size_t samples = 0;
  std::string spike_mode = "exactly-c";
  double threshold_exponent = -0.1;
  bool no_hybrids = false;
};

Report cmd_discrimination_game(const GameArgs& a, const OutputOptions& o) {
  if (o.quick && a.n > 10) throw UsageError("--quick caps --n at 10");
  require(a.m >= 1, "--m must be >= 1");
  require(a.t_max >= 0.0, "--t-max must be >= 0");
  const std::size_t samples = o.quick ? std::min<std::size_t>(a.samples, 50) : a.samples;
  const UnitaryKind kind = a.unitaries == "identity"      ? UnitaryKind::identity
                           : a.unitaries == "tensor-haar" ? UnitaryKind::tensor_haar
                                                          : UnitaryKind::haar;
  const SpikeMode mode =
      a.spike_mode == "up-to-c" ? SpikeMode::uniform_up_to_c : SpikeMode::uniform_exactly_c;
  require_dim(a.n <= 14, "discrimination-game: n must be <= 14");

  Report rep;
  Json& b = rep.body;
  Json params = {{"family", a.family}, {"n", a.n}, {"m", a.m}, {"beta", a.beta},
                 {"t_max", a.t_max}, {"unitaries", a.unitaries}, {"quick", o.quick}};
  if (a.family == "worst") {
    params["delta"] = a.delta;
  } else {
    params["k"] = a.k;
    params["c"] = a.c;
    params["samples"] = samples;
    params["spike_mode"] = a.spike_mode;
    params["threshold_exponent"] = a.threshold_exponent;
  }
  b["meta"] = meta("discrimination-game", a.seed, params);

  std::shared_ptr<const std::vector<double>> g;
  std::uint32_t mask = 0;
  std::optional<LocalInstance> local;
  if (a.family == "worst") {
    const WorstCaseInstance inst = build_worst_instance(a.n, a.delta, a.beta, a.seed);
    g = std::make_shared<const std::vector<double>>(inst.g.g);
    mask = inst.spike.x_mask();
    b["bound"] = distance_bound(inst);
  } else {
    LocalParams p;
    p.n = a.n;
    p.k = a.k;
    p.c = a.c;
    p.beta = a.beta;
    p.seed = a.seed;
    p.validate();
    local = sample_local_instance(p);
    g = std::make_shared<const std::vector<double>>(local->g.g);
    mask = sample_spike(a.n, a.c, mode, mix_seed(a.seed, 77)).x_mask();
  }
  b["spike_mask"] = mask;

  const RoundSchedule schedule = random_schedule(a.m, a.t_max, kind, mix_seed(a.seed, 5));
  const MaterializedSchedule ms = materialize(schedule, a.n);
  const Hamiltonian h0 = Hamiltonian::diagonal(a.n, g);
  const Hamiltonian h1 = Hamiltonian::spiked(a.n, g, mask, a.beta);
  const GameTranscript tr = run_game(h0, h1, ms, GameOptions{!a.no_hybrids, true});

  Json rounds = Json::array();
  std::ostringstream csv;
  csv << "k,t_k,delta_k,bound_k\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    Json r = {{"k", k + 1}, {"t", tr.times[k]}, {"delta", tr.per_step_dist[k]},
              {"bound", tr.per_step_bound[k]}};
    if (!tr.per_step_dist_explicit.empty()) r["delta_explicit"] = tr.per_step_dist_explicit[k];
    rounds.push_back(r);
    csv << k + 1 << ',' << fmt(tr.times[k]) << ',' << fmt(tr.per_step_dist[k]) << ','
        << fmt(tr.per_step_bound[k]) << '\n';
  }
  b["rounds"] = rounds;
  b["total_dist"] = tr.total_dist;
  b["sum_delta"] = tr.sum_delta;
  b["advantage"] = {{"helstrom", tr.advantage.helstrom},
                    {"euclidean_half", tr.advantage.euclidean_half}};
  b["hybrid_chain_holds"] = tr.hybrid_chain_holds;
  b["domination_holds"] = tr.domination_holds;
  b["max_norm_defect"] = tr.max_norm_defect;
  b["hybrid_discrepancy"] = tr.hybrid_discrepancy;
  rep.check(tr.hybrid_chain_holds, "total_dist <= sum delta_k");
  rep.check(tr.domination_holds, "delta_k <= operator-norm bound");
  rep.check(tr.norms_hold, "states unit norm to 1e-10");
  rep.check(tr.hybrid_discrepancy <= 1e-9, "explicit hybrids agree with per-step distances");
  rep.check(tr.advantage.helstrom <= tr.advantage.euclidean_half + 1e-12,
            "Helstrom advantage <= Euclidean bound");

  if (local && samples > 0) {
    AverageGameOptions opts;
    opts.mode = mode;
    opts.samples = samples;
    opts.seed = mix_seed(a.seed, 9);
    opts.threshold_exponent = a.threshold_exponent;
    const AverageGameReport avg = average_case_game(*local, schedule, opts);
    b["average"] = {{"samples", avg.samples},
                    {"mean_total", avg.mean_total},
                    {"se_total", avg.se_total},
                    {"mean_delta", avg.mean_delta},
                    {"mean_split_bound", avg.mean_split_bound},
                    {"envelope", avg.envelope},
                    {"bound_value", avg.bound_value},
                    {"bound_holds", avg.bound_holds},
                    {"threshold", avg.threshold},
                    {"projector_exact", avg.projector_exact},
                    {"projector_quadratic", avg.projector_quadratic},
                    {"projector_sampled", avg.projector_sampled},
                    {"max_projector_discrepancy", avg.max_projector_discrepancy},
                    {"projector_matches_goodness", avg.projector_matches_goodness},
                    {"split_bounds_hold", avg.split_bounds_hold}};
    rep.check(avg.bound_holds, "mean total <= m beta envelope + 3 SE");
    rep.check(avg.projector_matches_goodness, "averaged projector equals goodness fractions");
    rep.check(avg.max_projector_discrepancy <= 1e-12, "projector quadratic form matches");
  }
  rep.csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- goodness-scaling

struct ScalingArgs {
  int k = 3;
  int c = 2;
  std::string n_list = "10,12,14,16";
  int seeds = 5;
  std::uint64_t seed = 0;
  double threshold_exponent = 0.1;
  std::string support = "exactly-k";
};

Report cmd_goodness_scaling(const ScalingArgs& a, const OutputOptions& o) {
  std::vector<int> ns = parse_int_list(a.n_list);
  if (o.quick) ns.erase(std::remove_if(ns.begin(), ns.end(), [](int n) { return n > 12; }), ns.end());
  require(!ns.empty(), "--n-list must name at least one n");
  require(a.seeds >= 1, "--seeds must be >= 1");
  for (int n : ns) require_dim(n <= 20, "goodness-scaling: every n must be <= 20");

  Report rep;
  Json& b = rep.body;
  b["meta"] = meta("goodness-scaling", a.seed,
                   {{"k", a.k}, {"c", a.c}, {"n_list", ns}, {"seeds", a.seeds},
                    {"threshold_exponent", a.threshold_exponent}, {"support", a.support},
                    {"quick", o.quick}});
  std::ostringstream csv;
  csv << "n,k,c,seed,max_fraction,mean_fraction\n";
  Json per_n = Json::array();
  std::vector<double> medians;
  for (int n : ns) {
    std::vector<double> maxima;
    for (int s = 0; s < a.seeds; ++s) {
      LocalParams p;
      p.n = n;
      p.k = a.k;
      p.c = a.c;
      p.seed = mix_seed(a.seed, static_cast<std::uint64_t>(s));
      p.degree = a.support == "up-to-k" ? SupportDegree::up_to_k : SupportDegree::exactly_k;
      const GoodnessReport good = goodness_check(sample_local_instance(p), a.threshold_exponent);
      maxima.push_back(good.max_fraction);
      csv << n << ',' << a.k << ',' << a.c << ',' << s << ',' << fmt(good.max_fraction) << ','
          << fmt(good.mean_fraction) << '\n';
      rep.check(good.max_fraction >= 0.0 && good.max_fraction <= 1.0, "fractions in [0, 1]");
    }
    medians.push_back(median(maxima));
    per_n.push_back({{"n", n}, {"max_fractions", maxima}, {"median", medians.back()},
                     {"threshold", goodness_threshold(n, a.k, a.c, a.threshold_exponent)}});
  }
  bool non_increasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    if (medians[i] > medians[i - 1]) non_increasing = false;
  }
  b["per_n"] = per_n;
  b["median_non_increasing"] = non_increasing;
  rep.csv = csv.str();
  return rep;
}

void emit(const Report& rep, const OutputOptions& o, std::ostream& out, const std::string& table) {
  const std::string json = rep.body.dump(2) + "\n";
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) throw UsageError("cannot write " + o.out_path);
    f << json;
  }
  if (!o.csv_path.empty()) {
    std::ofstream f(o.csv_path);
    if (!f) throw UsageError("cannot write " + o.csv_path);
    f << rep.csv;
  }
  if (o.format == "csv") {
    out << rep.csv;
  } else if (!table.empty()) {
    out << table << "\nnonnegativity\n" << rep.csv;
  } else if (o.out_path.empty()) {
    out << json;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical companion for Hamiltonian spike-detection lower bounds", "hamlb"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version_string() + " (" + git_describe() + ")");
  OutputOptions o;
  app.add_option("--config", o.config_path, "JSON config; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  app.add_option("--out", o.out_path, "Write the JSON report to this file");
  app.add_option("--emit-csv", o.csv_path, "Write the CSV rows to this file");
  app.add_option("--format", o.format, "Format printed on stdout")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_flag("--quick", o.quick, "Cap n, trials and grid sizes for a fast run");

  std::map<CLI::App*, std::function<Report()>> handlers;
  std::map<CLI::App*, std::vector<std::string>> required;
  std::string prefix_command;

  WorstArgs wa;
  auto* worst = app.add_subcommand("worst-instance", "Worst-case instance and its distance sup");
  worst->add_option("--n", wa.n, "Qubits (>= 2), required");
  worst->add_option("--delta", wa.delta, "Hardness parameter in (0, 1/2)")->capture_default_str();
  worst->add_option("--beta", wa.beta, "Spike magnitude")->capture_default_str();
  worst->add_option("--seed", wa.seed, "Seed")->capture_default_str();
  worst->add_option("--sampler", wa.sampler, "Hard-function sampler")
      ->check(CLI::IsMember({"bent", "independent"}))
      ->capture_default_str();
  worst->add_option("--grid-max-j", wa.grid_max_j, "Largest grid exponent j")->capture_default_str();
  worst->add_option("--guard", wa.guard, "Envelope guard constant")->capture_default_str();
  worst->add_flag("--dense-check", wa.dense_check, "Compare against dense matrices (n <= 8)");
  worst->add_flag("--strict-envelope", wa.strict_envelope, "Fail when sup exceeds guard * bound");
  handlers[worst] = [&] { return cmd_worst_instance(wa, o); };
  required[worst] = {"--n"};

  LocalArgs la;
  auto* local = app.add_subcommand("local-instance", "Random k-local instance diagnostics");
  local->add_option("--n", la.n, "Qubits, required")->capture_default_str();
  local->add_option("--k", la.k, "Locality")->capture_default_str();
  local->add_option("--c", la.c, "Spike locality")->capture_default_str();
  local->add_option("--beta", la.beta, "Spike magnitude")->capture_default_str();
  local->add_option("--seed", la.seed, "Seed")->capture_default_str();
  local->add_option("--support", la.support, "Coefficient support")
      ->check(CLI::IsMember({"exactly-k", "up-to-k"}))
      ->capture_default_str();
  local->add_option("--threshold-exponent", la.threshold_exponent,
                    "Goodness threshold n^{e (k - c)}")
      ->capture_default_str();
  local->add_option("--split-exponent", la.split_exponent, "Exponent defining V in the split bound")
      ->capture_default_str();
  local->add_option("--psd-d", la.psd_d, "Spike family size for the covariance check")
      ->capture_default_str();
  local->add_option("--per-step", la.per_step, "Random per-step split checks")->capture_default_str();
  local->add_option("--t", la.t, "Evolution time for per-step checks")->capture_default_str();
  handlers[local] = [&] { return cmd_local_instance(la, o); };
  required[local] = {"--n"};

  IdentityArgs ia;
  auto* ident = app.add_subcommand("verify-identities", "Exact binomial identity sweep");
  ident->add_option("--max-n", ia.max_n, "Largest n")->capture_default_str();
  ident->add_option("--max-l", ia.max_l, "Largest l for the simple identity")->capture_default_str();
  ident->add_option("--max-c", ia.max_c, "Largest c")->capture_default_str();
  handlers[ident] = [&] { return cmd_verify_identities(ia, o); };

  SweepArgs sa;
  auto* sweep = app.add_subcommand("matrix-bound-sweep", "Random gapped perturbation sweep");
  sweep->add_option("--dim", sa.dim, "Matrix dimension")->capture_default_str();
  sweep->add_option("--D", sa.gap, "Minimum diagonal gap")->capture_default_str();
  sweep->add_option("--C", sa.delta_norm, "Perturbation operator norm")->capture_default_str();
  sweep->add_option("--trials", sa.trials, "Trials")->capture_default_str();
  sweep->add_option("--seed", sa.seed, "Seed")->capture_default_str();
  sweep->add_option("--t-min", sa.t_min, "Smallest time")->capture_default_str();
  sweep->add_option("--t-max", sa.t_max, "Largest time")->capture_default_str();
  sweep->add_option("--t-points", sa.t_points, "Geometric grid points")->capture_default_str();
  sweep->add_option("--guard", sa.guard, "Envelope guard constant")->capture_default_str();
  sweep->add_flag("--strict-envelope", sa.strict_envelope, "Fail when the ratio exceeds the guard");
  handlers[sweep] = [&] { return cmd_matrix_bound_sweep(sa, o); };

  GameArgs ga;
  auto* game = app.add_subcommand("discrimination-game", "Interleaved evolution game transcript");
  game->add_option("--family", ga.family, "Instance family")
      ->check(CLI::IsMember({"worst", "local"}))
      ->capture_default_str();
  game->add_option("--n", ga.n, "Qubits, required");
  game->add_option("--k", ga.k, "Locality (local family)")->capture_default_str();
  game->add_option("--c", ga.c, "Spike locality (local family)")->capture_default_str();
  game->add_option("--m", ga.m, "Rounds")->capture_default_str();
  game->add_option("--beta", ga.beta, "Spike magnitude")->capture_default_str();
  game->add_option("--delta", ga.delta, "Hardness parameter (worst family)")->capture_default_str();
  game->add_option("--seed", ga.seed, "Seed")->capture_default_str();
  game->add_option("--t-max", ga.t_max, "Times drawn uniformly from [0, t-max]")->capture_default_str();
  game->add_option("--unitaries", ga.unitaries, "Control unitaries")
      ->check(CLI::IsMember({"haar", "tensor-haar", "identity"}))
      ->capture_default_str();
  game->add_option("--samples", ga.samples, "Spike samples for the averaged game (local family)")
      ->capture_default_str();
  game->add_option("--spike-mode", ga.spike_mode, "Spike ensemble")
      ->check(CLI::IsMember({"exactly-c", "up-to-c"}))
      ->capture_default_str();
  game->add_option("--threshold-exponent", ga.threshold_exponent, "Exponent defining V")
      ->capture_default_str();
  game->add_flag("--no-hybrids", ga.no_hybrids, "Skip the explicit hybrid states");
  handlers[game] = [&] { return cmd_discrimination_game(ga, o); };
  required[game] = {"--n"};

  ScalingArgs ca;
  auto* scaling = app.add_subcommand("goodness-scaling", "Goodness fraction across n");
  scaling->add_option("--k", ca.k, "Locality")->capture_default_str();
  scaling->add_option("--c", ca.c, "Spike locality")->capture_default_str();
  scaling->add_option("--n-list", ca.n_list, "Comma-separated n values")->capture_default_str();
  scaling->add_option("--seeds", ca.seeds, "Seeds per n")->capture_default_str();
  scaling->add_option("--seed", ca.seed, "Base seed")->capture_default_str();
  scaling->add_option("--threshold-exponent", ca.threshold_exponent, "Goodness threshold exponent")
      ->capture_default_str();
  scaling->add_option("--support", ca.support, "Coefficient support")
      ->check(CLI::IsMember({"exactly-k", "up-to-k"}))
      ->capture_default_str();
  handlers[scaling] = [&] { return cmd_goodness_scaling(ca, o); };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out;
    std::ostringstream cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (!o.config_path.empty()) {
      std::ifstream f(o.config_path);
      Json config;
      try {
        config = Json::parse(f);
      } catch (const Json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!config.is_object()) throw UsageError("config must be a JSON object");
      apply_config(chosen, config);
    }
    for (const auto& name : required[chosen]) require_given(chosen, name);
    Report rep = handlers.at(chosen)();
    rep.body["ok"] = rep.ok;
    rep.body["failed_checks"] = rep.failures;
    emit(rep, o, out, chosen == ident ? identity_table(rep) : "");
    for (const auto& f : rep.failures) err << "invariant failed: " << f << '\n';
    return rep.ok ? kExitOk : kExitInvariant;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionGuardError& e) {
    err << "size guard: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CertificationError& e) {
    err << "certification failed: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace hamlb
