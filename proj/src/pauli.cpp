#include "hamlb/pauli.hpp"

#include <cmath>

#include "json.hpp"

#include "hamlb/common.hpp"
#include "hamlb/detail/fwht.hpp"

namespace hamlb {

namespace {

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void require_fits(int n, std::uint32_t mask, const char* what) {
  require(n >= 1 && n <= kMaxQubits, std::string(what) + ": qubit count must be in [1, 24]");
  require((static_cast<std::uint64_t>(mask) >> n) == 0,
          std::string(what) + ": mask does not fit in n bits");
}

// Adds coeff * P into a dense matrix.
void accumulate(CMatrix& out, const PauliString& p, double coeff) {
  const Complex base = coeff * i_power(popcount(p.x_mask() & p.z_mask()));
  const Eigen::Index dim = out.rows();
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint32_t>(b);
    const double sign = (popcount(p.z_mask() & ub) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(ub ^ p.x_mask()), b) += sign * base;
  }
}

}  // namespace

PauliString::PauliString(int n, std::uint32_t x_mask, std::uint32_t z_mask)
    : n_(n), x_(x_mask), z_(z_mask) {
  require_fits(n, x_mask, "PauliString");
  require_fits(n, z_mask, "PauliString");
}

PauliString PauliString::from_string(std::string_view s) {
  const int n = static_cast<int>(s.size());
  require(n >= 1 && n <= kMaxQubits, "PauliString::from_string: length must be in [1, 24]");
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << (n - 1 - i);
    switch (s[static_cast<std::size_t>(i)]) {
      case 'I': case '_': break;
      case 'X': x |= bit; break;
      case 'Z': z |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      default: throw PreconditionError("PauliString::from_string: bad character");
    }
  }
  return {n, x, z};
}

int PauliString::locality() const { return popcount(x_ | z_); }

std::string PauliString::str() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(n_));
  for (int q = n_ - 1; q >= 0; --q) {
    const bool xb = (x_ >> q) & 1u;
    const bool zb = (z_ >> q) & 1u;
    out.push_back(xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I'));
  }
  return out;
}

PauliProduct multiply(const PauliString& p, const PauliString& q) {
  require(p.n() == q.n(), "multiply: qubit counts differ");
  const std::uint32_t x = p.x_mask() ^ q.x_mask();
  const std::uint32_t z = p.z_mask() ^ q.z_mask();
  // i^{|x1 z1|} X^x1 Z^z1 i^{|x2 z2|} X^x2 Z^z2
  //   = i^{|x1 z1| + |x2 z2| + 2|z1 x2|} X^x Z^z
  //   = i^{|x1 z1| + |x2 z2| + 2|z1 x2| - |x z|} P(x, z)
  int phase = popcount(p.x_mask() & p.z_mask()) + popcount(q.x_mask() & q.z_mask()) +
              2 * popcount(p.z_mask() & q.x_mask()) - popcount(x & z);
  phase = ((phase % 4) + 4) % 4;
  return {phase, PauliString(p.n(), x, z)};
}

CMatrix pauli_matrix(const PauliString& p) {
  require_dim(p.n() <= kMaxDenseQubits, "pauli_matrix: dense guard is n <= 10");
  const Eigen::Index dim = Eigen::Index{1} << p.n();
  CMatrix out = CMatrix::Zero(dim, dim);
  accumulate(out, p, 1.0);
  return out;
}

CoeffVector::CoeffVector(int n) : n_(n) {
  require(n >= 1 && n <= kMaxQubits, "CoeffVector: qubit count must be in [1, 24]");
}

void CoeffVector::set(const PauliString& p, double coeff) {
  require(p.n() == n_, "CoeffVector::set: qubit count mismatch");
  require(std::isfinite(coeff), "CoeffVector::set: coefficient must be finite");
  terms_[p] = coeff;
}

double CoeffVector::get(const PauliString& p) const {
  const auto it = terms_.find(p);
  return it == terms_.end() ? 0.0 : it->second;
}

bool CoeffVector::is_z_only() const {
  for (const auto& [p, c] : terms_) {
    if (p.x_mask() != 0) return false;
  }
  return true;
}

int CoeffVector::max_locality() const {
  int k = 0;
  for (const auto& [p, c] : terms_) k = std::max(k, p.locality());
  return k;
}

SupportKind CoeffVector::support() const {
  if (is_z_only()) return SupportKind::z_only;
  return max_locality() < n_ ? SupportKind::k_local : SupportKind::general;
}

double CoeffVector::max_abs(const PauliString* excluded) const {
  double best = 0.0;
  for (const auto& [p, c] : terms_) {
    if (excluded != nullptr && p == *excluded) continue;
    best = std::max(best, std::abs(c));
  }
  return best;
}

double CoeffVector::l1_norm() const {
  double sum = 0.0;
  for (const auto& [p, c] : terms_) sum += std::abs(c);
  return sum;
}

std::string CoeffVector::to_json() const {
  nlohmann::ordered_json doc;
  doc["n"] = n_;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& [p, c] : terms_) {
    nlohmann::ordered_json t;
    t["x_mask"] = p.x_mask();
    t["z_mask"] = p.z_mask();
    t["coeff"] = c;
    terms.push_back(std::move(t));
  }
  doc["terms"] = std::move(terms);
  return doc.dump();
}

CoeffVector CoeffVector::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(std::string("CoeffVector::from_json: ") + e.what());
  }
  require(doc.is_object() && doc.contains("n") && doc.contains("terms"),
          "CoeffVector::from_json: expected {\"n\", \"terms\"}");
  require(doc["n"].is_number_integer(), "CoeffVector::from_json: n must be an integer");
  require(doc["terms"].is_array(), "CoeffVector::from_json: terms must be an array");
  CoeffVector out(doc["n"].get<int>());
  for (const auto& t : doc["terms"]) {
    require(t.is_object() && t.contains("x_mask") && t.contains("z_mask") && t.contains("coeff"),
            "CoeffVector::from_json: malformed term");
    require(t["x_mask"].is_number_unsigned() && t["z_mask"].is_number_unsigned(),
            "CoeffVector::from_json: masks must be non-negative integers");
    require(t["coeff"].is_number(), "CoeffVector::from_json: coeff must be a number");
    const auto x = t["x_mask"].get<std::uint64_t>();
    const auto z = t["z_mask"].get<std::uint64_t>();
    require(x <= 0xffffffffULL && z <= 0xffffffffULL, "CoeffVector::from_json: mask overflow");
    const PauliString p(out.n(), static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(z));
    require(out.terms_.count(p) == 0, "CoeffVector::from_json: duplicate term");
    out.set(p, t["coeff"].get<double>());
  }
  return out;
}

CMatrix dense_hamiltonian(const CoeffVector& alpha) {
  require_dim(alpha.n() <= kMaxDenseQubits, "dense_hamiltonian: dense guard is n <= 10");
  const Eigen::Index dim = Eigen::Index{1} << alpha.n();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& [p, c] : alpha.terms()) accumulate(out, p, c);
  return out;
}

DiagonalHamiltonian build_diagonal(const CoeffVector& alpha) {
  require(alpha.is_z_only(), "build_diagonal: coefficient vector has non-Z support");
  DiagonalHamiltonian out;
  out.n = alpha.n();
  out.g.assign(std::size_t{1} << alpha.n(), 0.0);
  for (const auto& [p, c] : alpha.terms()) out.g[p.z_mask()] = c;
  detail::fwht_inplace(out.g);
  return out;
}

}  // namespace hamlb
