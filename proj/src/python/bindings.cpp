#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hamlb/cli.hpp"
#include "hamlb/combinatorics.hpp"
#include "hamlb/common.hpp"
#include "hamlb/fourier.hpp"
#include "hamlb/game.hpp"
#include "hamlb/linalg.hpp"
#include "hamlb/local_case.hpp"
#include "hamlb/worst_case.hpp"

namespace py = pybind11;
using namespace hamlb;

namespace {

SupportDegree parse_degree(const std::string& s) {
  if (s == "exactly-k") return SupportDegree::exactly_k;
  if (s == "up-to-k") return SupportDegree::up_to_k;
  throw PreconditionError("support must be 'exactly-k' or 'up-to-k'");
}

SpikeMode parse_spike_mode(const std::string& s) {
  if (s == "exactly-c") return SpikeMode::uniform_exactly_c;
  if (s == "up-to-c") return SpikeMode::uniform_up_to_c;
  throw PreconditionError("spike mode must be 'exactly-c' or 'up-to-c'");
}

UnitaryKind parse_unitary_kind(const std::string& s) {
  if (s == "haar") return UnitaryKind::haar;
  if (s == "tensor-haar") return UnitaryKind::tensor_haar;
  if (s == "identity") return UnitaryKind::identity;
  throw PreconditionError("unitaries must be 'haar', 'tensor-haar' or 'identity'");
}

py::dict transcript_dict(const GameTranscript& tr) {
  py::dict d;
  d["times"] = tr.times;
  d["per_step_dist"] = tr.per_step_dist;
  d["per_step_bound"] = tr.per_step_bound;
  d["total_dist"] = tr.total_dist;
  d["sum_delta"] = tr.sum_delta;
  d["helstrom"] = tr.advantage.helstrom;
  d["euclidean_half"] = tr.advantage.euclidean_half;
  d["hybrid_chain_holds"] = tr.hybrid_chain_holds;
  d["domination_holds"] = tr.domination_holds;
  d["norms_hold"] = tr.norms_hold;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hamlb, m) {
  m.doc() = "Spike-detection lower-bound toolkit";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DimensionGuardError>(m, "DimensionGuardError", PyExc_ValueError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);

  m.def("wht_forward", [](int n, std::vector<double> values) {
    return wht_forward(BooleanTable(n, std::move(values))).coeffs();
  }, py::arg("n"), py::arg("values"));
  m.def("wht_inverse", [](int n, std::vector<double> coeffs) {
    return wht_inverse(FourierTable(n, std::move(coeffs))).values();
  }, py::arg("n"), py::arg("coeffs"));

  m.def("sample_hard_function", [](int n, double delta, std::uint64_t seed, const std::string& sampler) {
    const SamplerMode mode = sampler == "independent" ? SamplerMode::independent : SamplerMode::bent;
    const HardFunction f = sample_hard_function(n, delta, seed, mode);
    py::dict d;
    d["table"] = f.table.values();
    d["fourier"] = f.fourier.coeffs();
    d["amplitude"] = f.certificate.amplitude;
    d["max_fourier"] = f.certificate.max_fourier;
    d["attempts"] = f.certificate.attempts;
    return d;
  }, py::arg("n"), py::arg("delta") = 0.1, py::arg("seed") = 0, py::arg("sampler") = "bent");

  py::class_<WorstCaseInstance>(m, "WorstCaseInstance")
      .def_readonly("n", &WorstCaseInstance::n)
      .def_readonly("delta", &WorstCaseInstance::delta)
      .def_readonly("beta", &WorstCaseInstance::beta)
      .def_readonly("block_gaps", &WorstCaseInstance::block_gaps)
      .def_property_readonly("diagonal", [](const WorstCaseInstance& w) { return w.g.g; })
      .def_property_readonly("alpha", [](const WorstCaseInstance& w) { return w.alpha_dense.coeffs(); })
      .def("alpha_max_abs", &WorstCaseInstance::alpha_max_abs);

  m.def("build_worst_instance", [](int n, double delta, double beta, std::uint64_t seed) {
    return build_worst_instance(n, delta, beta, seed);
  }, py::arg("n"), py::arg("delta") = 0.1, py::arg("beta") = 1.0, py::arg("seed") = 0);
  m.def("exact_block_distance", &exact_block_distance, py::arg("instance"), py::arg("t"));
  m.def("dense_block_distance", &dense_block_distance, py::arg("instance"), py::arg("t"));
  m.def("distance_bound", &distance_bound, py::arg("instance"));
  m.def("default_t_grid", &default_t_grid, py::arg("instance"), py::arg("max_j") = 40);
  m.def("sup_distance", [](const WorstCaseInstance& inst, int max_j, double guard) {
    const SupSearch s = sup_distance(inst, default_t_grid(inst, max_j), guard);
    py::dict d;
    d["t_grid"] = s.t_grid;
    d["distances"] = s.distances;
    d["sup"] = s.sup;
    d["sup_t"] = s.sup_t;
    d["bound"] = s.bound;
    d["max_ratio"] = s.max_ratio;
    d["envelope_pass"] = s.envelope_pass;
    d["trivial_pass"] = s.trivial_pass;
    return d;
  }, py::arg("instance"), py::arg("max_j") = 40, py::arg("guard") = kGuard);

  m.def("z_count", [](int n, int k, int c, int t) {
    const BinomTable b(n);
    return z_count({n, k, c, t}, ZMethod::partition_sum, b).str();
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("t"));
  m.def("verify_complex_identity", [](int n, int k, int c, int r) {
    const BinomTable b(n);
    const ComplexIdentityResult res = verify_complex_identity(n, k, c, r, b);
    py::dict d;
    d["lhs"] = res.lhs.str();
    d["rhs"] = to_string(res.rhs);
    d["pass"] = res.pass;
    d["methods_agree"] = res.methods_agree;
    return d;
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("r"));

  py::class_<LocalInstance>(m, "LocalInstance")
      .def_readonly("sigma2", &LocalInstance::sigma2)
      .def_readonly("alpha_max_abs", &LocalInstance::alpha_max_abs)
      .def_property_readonly("n", [](const LocalInstance& l) { return l.params.n; })
      .def_property_readonly("diagonal", [](const LocalInstance& l) { return l.g.g; })
      .def_property_readonly("num_terms", [](const LocalInstance& l) { return l.alpha.size(); });

  m.def("sample_local_instance", [](int n, int k, int c, double beta, std::uint64_t seed,
                                    const std::string& support) {
    LocalParams p;
    p.n = n;
    p.k = k;
    p.c = c;
    p.beta = beta;
    p.seed = seed;
    p.degree = parse_degree(support);
    return sample_local_instance(p);
  }, py::arg("n"), py::arg("k") = 3, py::arg("c") = 2, py::arg("beta") = 1.0, py::arg("seed") = 0,
     py::arg("support") = "exactly-k");
  m.def("goodness_check", [](const LocalInstance& inst, double exponent) {
    const GoodnessReport r = goodness_check(inst, exponent);
    py::dict d;
    d["threshold"] = r.threshold;
    d["num_spikes"] = r.num_spikes;
    d["per_x_fraction"] = r.per_x_fraction;
    d["max_fraction"] = r.max_fraction;
    d["mean_fraction"] = r.mean_fraction;
    return d;
  }, py::arg("instance"), py::arg("threshold_exponent") = 0.1);
  m.def("covariance_min_eigenvalue", [](int n, int k, int c, std::size_t d_max, std::uint64_t seed) {
    const PsdCheck p = covariance_psd_check(
        covariance_bruteforce(n, k, c, choose_spike_family(n, c, d_max, seed)));
    return py::make_tuple(p.min_eigenvalue, p.floor, p.pass);
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("d_max") = 128, py::arg("seed") = 0);

  m.def("opnorm_diff_exp", [](std::vector<double> diag, const CMatrix& delta, double t) {
    return opnorm_diff_exp(diag, HermitianMatrix(delta), t);
  }, py::arg("diag"), py::arg("delta"), py::arg("t"));
  m.def("eig_hermitian", [](const CMatrix& a) {
    const EigenSystem es = eig_hermitian(HermitianMatrix(a));
    return py::make_tuple(es.values, es.vectors);
  }, py::arg("a"));
  m.def("haar_unitary", &haar_unitary, py::arg("dim"), py::arg("seed") = 0);

  m.def("worst_case_game", [](const WorstCaseInstance& inst, std::size_t m, double t_max,
                              const std::string& unitaries, std::uint64_t seed) {
    auto g = std::make_shared<const std::vector<double>>(inst.g.g);
    const Hamiltonian h0 = Hamiltonian::diagonal(inst.n, g);
    const Hamiltonian h1 = Hamiltonian::spiked(inst.n, g, inst.spike.x_mask(), inst.beta);
    return transcript_dict(
        run_game(h0, h1, random_schedule(m, t_max, parse_unitary_kind(unitaries), seed)));
  }, py::arg("instance"), py::arg("m"), py::arg("t_max") = 4.0, py::arg("unitaries") = "haar",
     py::arg("seed") = 0);
  m.def("local_game", [](const LocalInstance& inst, std::size_t m, double t_max,
                         const std::string& spike_mode, std::uint64_t seed) {
    const int n = inst.params.n;
    auto g = std::make_shared<const std::vector<double>>(inst.g.g);
    const std::uint32_t mask = sample_spike(n, inst.params.c, parse_spike_mode(spike_mode), seed).x_mask();
    const Hamiltonian h0 = Hamiltonian::diagonal(n, g);
    const Hamiltonian h1 = Hamiltonian::spiked(n, g, mask, inst.params.beta);
    py::dict d = transcript_dict(run_game(h0, h1, random_schedule(m, t_max, UnitaryKind::haar, seed)));
    d["spike_mask"] = mask;
    return d;
  }, py::arg("instance"), py::arg("m"), py::arg("t_max") = 4.0, py::arg("spike_mode") = "exactly-c",
     py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
  m.attr("__version__") = version_string();
}
