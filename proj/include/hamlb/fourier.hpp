#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hamlb {

/// Real function on {+-1}^n, indexed by basis index b (x_q = (-1)^{b_q}).
class BooleanTable {
 public:
  BooleanTable(int n, std::vector<double> values);
  int n() const { return n_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t b) const { return values_[b]; }

 private:
  int n_;
  std::vector<double> values_;
};

/// Fourier coefficients fhat(S), indexed by the subset bitmask S.
class FourierTable {
 public:
  FourierTable(int n, std::vector<double> coeffs);
  int n() const { return n_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double operator[](std::size_t s) const { return coeffs_[s]; }
  double max_abs() const;

 private:
  int n_;
  std::vector<double> coeffs_;
};

/// fhat(S) = 2^{-n} sum_x f(x) chi_S(x).
FourierTable wht_forward(const BooleanTable& f);

/// f(x) = sum_S fhat(S) chi_S(x).
BooleanTable wht_inverse(const FourierTable& fhat);

enum class SamplerMode {
  /// Random Maiorana-McFarland bent function (odd n: a random bent function
  /// on the low n-1 bits for each value of the top bit). Every value is
  /// marginally uniform on {+-A}.
  bent,
  /// Independent uniform signs for every x.
  independent,
};

struct HardFunctionCertificate {
  int n = 0;
  double delta = 0.0;
  SamplerMode mode = SamplerMode::bent;
  double amplitude = 0.0;               ///< 2^{(1/2 - delta) n}
  double max_fourier = 0.0;             ///< max_S |fhat(S)| of the returned table
  int attempts = 0;                     ///< 1 + resamples
  std::vector<double> attempt_max_fourier;
};

struct HardFunction {
  BooleanTable table;
  FourierTable fourier;
  HardFunctionCertificate certificate;
};

inline constexpr int kMaxResamples = 8;

double hard_function_amplitude(int n, double delta);

/// Samples f with |f(x)| = 2^{(1/2-delta)n} for every x and certifies
/// max_S |fhat(S)| <= 1, resampling up to max_resamples times. Throws
/// CertificationError when every attempt fails.
HardFunction sample_hard_function(int n, double delta, std::uint64_t seed,
                                  SamplerMode mode = SamplerMode::bent,
                                  int max_resamples = kMaxResamples);

/// g(x) = f(x_{-n}) (1 + x_n) on n = f.n() + 1 bits, where the new last
/// coordinate x_n is qubit 0 and x_{-n} occupies bits 1..n-1.
BooleanTable lift_to_g(const BooleanTable& f);

/// Binary layout: 4-byte magic ("HLBT" or "HLFT"), uint32 n, then 2^n
/// float64 values, all little-endian.
std::string serialize(const BooleanTable& f);
std::string serialize(const FourierTable& fhat);
BooleanTable deserialize_boolean_table(std::string_view bytes);
FourierTable deserialize_fourier_table(std::string_view bytes);

}  // namespace hamlb
