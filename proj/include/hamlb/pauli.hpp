#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hamlb/linalg.hpp"

namespace hamlb {

/// Conventions used throughout the library:
///  * qubit q (0-based) is bit q of every mask and of every basis index;
///  * a basis index b corresponds to x in {+-1}^n with x_q = (-1)^{b_q};
///  * dense matrices are Kronecker products P_{n-1} (x) ... (x) P_0, so the
///    string form "ZX" means Z on qubit 1 and X on qubit 0;
///  * a mask pair (x, z) denotes i^{|x & z|} X^x Z^z, i.e. Y = iXZ.
/// The 1-based coordinate i of an n-bit vector corresponds to qubit n - i, so
/// "the last coordinate" is qubit 0.
inline constexpr int kMaxQubits = 24;
inline constexpr int kMaxDenseQubits = 10;

class PauliString {
 public:
  PauliString(int n, std::uint32_t x_mask, std::uint32_t z_mask);

  static PauliString identity(int n) { return {n, 0u, 0u}; }
  static PauliString z_on(int n, std::uint32_t subset) { return {n, 0u, subset}; }
  static PauliString x_on(int n, std::uint32_t subset) { return {n, subset, 0u}; }
  /// Leftmost character acts on qubit n-1. Accepts I, X, Y, Z and '_'.
  static PauliString from_string(std::string_view s);

  int n() const { return n_; }
  std::uint32_t x_mask() const { return x_; }
  std::uint32_t z_mask() const { return z_; }
  int locality() const;
  bool is_k_local(int k) const { return locality() <= k; }
  bool is_z_type() const { return x_ == 0; }
  std::string str() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  int n_;
  std::uint32_t x_;
  std::uint32_t z_;
};

/// Product P * Q = i^phase * R.
struct PauliProduct {
  int phase;  ///< exponent of i, in {0, 1, 2, 3}
  PauliString result;
};

PauliProduct multiply(const PauliString& p, const PauliString& q);

/// Dense 2^n x 2^n matrix of P (n <= kMaxDenseQubits).
CMatrix pauli_matrix(const PauliString& p);

enum class SupportKind { z_only, k_local, general };

/// Sparse map from Pauli strings to real coefficients.
class CoeffVector {
 public:
  explicit CoeffVector(int n);

  int n() const { return n_; }
  const std::map<PauliString, double>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Sets alpha_P (replacing any previous value).
  void set(const PauliString& p, double coeff);
  double get(const PauliString& p) const;

  SupportKind support() const;
  bool is_z_only() const;
  int max_locality() const;
  /// max_P |alpha_P|, optionally skipping one excluded string.
  double max_abs(const PauliString* excluded = nullptr) const;
  double l1_norm() const;

  /// {"n": int, "terms": [{"x_mask": int, "z_mask": int, "coeff": float}]},
  /// terms ordered by (x_mask, z_mask).
  std::string to_json() const;
  static CoeffVector from_json(std::string_view text);

 private:
  int n_;
  std::map<PauliString, double> terms_;
};

/// Dense M(alpha) = sum_P alpha_P P (n <= kMaxDenseQubits).
CMatrix dense_hamiltonian(const CoeffVector& alpha);

/// Diagonal of a Z-supported M(alpha): g[b] = <b|M(alpha)|b>.
struct DiagonalHamiltonian {
  int n = 0;
  std::vector<double> g;
};

/// g_x = sum_S alpha_{Z_S} chi_S(x), via the fast Walsh-Hadamard transform.
DiagonalHamiltonian build_diagonal(const CoeffVector& alpha);

/// Index of x * y_T, i.e. x with the coordinates in T negated.
inline std::uint32_t apply_y_flip(std::uint32_t x, std::uint32_t t_mask) { return x ^ t_mask; }

}  // namespace hamlb
