#include "hamlb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "hamlb/common.hpp"
#include "hamlb/detail/fwht.hpp"

namespace hamlb {

namespace {

constexpr int kMaxTableBits = 24;

void check_table(int n, std::size_t size, const char* what) {
  require_dim(n >= 0 && n <= kMaxTableBits, std::string(what) + ": n must be in [0, 24]");
  require(size == (std::size_t{1} << n), std::string(what) + ": length must be 2^n");
}

// Random bent function on m (even) bits: (-1)^{u . pi(v) + h(v)} with u the
// low m/2 bits and v the high m/2 bits.
void fill_bent(std::span<double> out, int m, Rng& rng) {
  const int half = m / 2;
  const std::size_t side = std::size_t{1} << half;
  std::vector<std::uint32_t> perm(side);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> shift(side);
  std::bernoulli_distribution coin(0.5);
  for (auto& s : shift) s = coin(rng) ? 1 : 0;
  for (std::size_t b = 0; b < out.size(); ++b) {
    const auto u = static_cast<std::uint32_t>(b & (side - 1));
    const std::size_t v = b >> half;
    const int parity = (popcount(u & perm[v]) + shift[v]) & 1;
    out[b] = parity ? -1.0 : 1.0;
  }
}

std::vector<double> sample_signs(int n, SamplerMode mode, Rng& rng) {
  std::vector<double> signs(std::size_t{1} << n);
  if (mode == SamplerMode::independent) {
    std::bernoulli_distribution coin(0.5);
    for (auto& s : signs) s = coin(rng) ? -1.0 : 1.0;
    return signs;
  }
  if (n % 2 == 0) {
    fill_bent(signs, n, rng);
  } else {
    const std::size_t half = signs.size() / 2;
    fill_bent(std::span<double>(signs).first(half), n - 1, rng);
    fill_bent(std::span<double>(signs).subspan(half), n - 1, rng);
  }
  return signs;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

std::string serialize_values(const char* magic, int n, const std::vector<double>& values) {
  std::string out(magic, 4);
  put_u32(out, static_cast<std::uint32_t>(n));
  out.reserve(8 + 8 * values.size());
  for (double d : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  return out;
}

std::pair<int, std::vector<double>> deserialize_values(const char* magic, std::string_view in) {
  require(in.size() >= 8 && in.substr(0, 4) == std::string_view(magic, 4),
          "table deserialize: bad magic");
  const std::uint32_t n = get_u32(in, 4);
  require_dim(n <= kMaxTableBits, "table deserialize: n exceeds 24");
  const std::size_t count = std::size_t{1} << n;
  require(in.size() == 8 + 8 * count, "table deserialize: payload length does not match n");
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[8 + 8 * k + i])) << (8 * i);
    }
    std::memcpy(&values[k], &bits, sizeof bits);
  }
  return {static_cast<int>(n), std::move(values)};
}

}  // namespace

BooleanTable::BooleanTable(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_table(n_, values_.size(), "BooleanTable");
}

FourierTable::FourierTable(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_table(n_, coeffs_.size(), "FourierTable");
}

double FourierTable::max_abs() const {
  double best = 0.0;
  for (double c : coeffs_) best = std::max(best, std::abs(c));
  return best;
}

FourierTable wht_forward(const BooleanTable& f) {
  std::vector<double> v = f.values();
  detail::fwht_inplace(v);
  const double scale = std::ldexp(1.0, -f.n());
  for (double& x : v) x *= scale;
  return FourierTable(f.n(), std::move(v));
}

BooleanTable wht_inverse(const FourierTable& fhat) {
  std::vector<double> v = fhat.coeffs();
  detail::fwht_inplace(v);
  return BooleanTable(fhat.n(), std::move(v));
}

double hard_function_amplitude(int n, double delta) { return std::exp2((0.5 - delta) * n); }

HardFunction sample_hard_function(int n, double delta, std::uint64_t seed, SamplerMode mode,
                                  int max_resamples) {
  require(n >= 1, "sample_hard_function: n must be >= 1");
  require_dim(n <= kMaxTableBits, "sample_hard_function: n must be <= 24");
  require(delta > 0.0 && delta < 0.5, "sample_hard_function: delta must be in (0, 1/2)");
  require(max_resamples >= 0, "sample_hard_function: max_resamples must be >= 0");

  HardFunctionCertificate cert;
  cert.n = n;
  cert.delta = delta;
  cert.mode = mode;
  cert.amplitude = hard_function_amplitude(n, delta);

  for (int attempt = 0; attempt <= max_resamples; ++attempt) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(attempt));
    std::vector<double> values = sample_signs(n, mode, rng);
    for (double& v : values) v *= cert.amplitude;
    BooleanTable table(n, std::move(values));
    FourierTable fourier = wht_forward(table);
    const double max_fourier = fourier.max_abs();
    cert.attempts = attempt + 1;
    cert.attempt_max_fourier.push_back(max_fourier);
    if (max_fourier <= 1.0) {
      cert.max_fourier = max_fourier;
      return {std::move(table), std::move(fourier), std::move(cert)};
    }
  }
  throw CertificationError("sample_hard_function: no certified table after " +
                           std::to_string(max_resamples + 1) + " attempts (n=" +
                           std::to_string(n) + ", delta=" + std::to_string(delta) +
                           ", best max|fhat|=" +
                           std::to_string(*std::min_element(cert.attempt_max_fourier.begin(),
                                                            cert.attempt_max_fourier.end())) +
                           ")");
}

BooleanTable lift_to_g(const BooleanTable& f) {
  require_dim(f.n() + 1 <= kMaxTableBits, "lift_to_g: output would exceed 24 bits");
  const std::size_t size = std::size_t{1} << (f.n() + 1);
  std::vector<double> g(size);
  for (std::size_t b = 0; b < size; ++b) {
    // x_n = +1 when bit 0 is clear, giving 1 + x_n = 2.
    g[b] = (b & 1u) ? 0.0 : 2.0 * f[b >> 1];
  }
  return BooleanTable(f.n() + 1, std::move(g));
}

std::string serialize(const BooleanTable& f) { return serialize_values("HLBT", f.n(), f.values()); }

std::string serialize(const FourierTable& fhat) {
  return serialize_values("HLFT", fhat.n(), fhat.coeffs());
}

BooleanTable deserialize_boolean_table(std::string_view bytes) {
  auto [n, values] = deserialize_values("HLBT", bytes);
  return BooleanTable(n, std::move(values));
}

FourierTable deserialize_fourier_table(std::string_view bytes) {
  auto [n, values] = deserialize_values("HLFT", bytes);
  return FourierTable(n, std::move(values));
}

}  // namespace hamlb
