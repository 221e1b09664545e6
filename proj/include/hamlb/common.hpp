#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hamlb {

/// Raised when an input violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a dense/enumerative size guard would be exceeded.
class DimensionGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a randomized construction cannot produce a certified instance.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline void require_dim(bool cond, const std::string& what) {
  if (!cond) throw DimensionGuardError(what);
}

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, stream));
}

inline int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

/// Worker count: HAMLB_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("HAMLB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end, chunk_index) over contiguous chunks of [0, n).
/// Chunk boundaries depend only on n and the worker count, and callers
/// reduce per-chunk results in chunk order.
template <class Body>
std::size_t parallel_chunks(std::size_t n, Body&& body,
                            std::size_t min_chunk = 4096) {
  const std::size_t workers = std::min<std::size_t>(
      thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    body(std::size_t{0}, n, std::size_t{0});
    return 1;
  }
  const std::size_t step = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * step;
    const std::size_t e = std::min(n, b + step);
    if (b >= e) break;
    pool.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
  for (auto& t : pool) t.join();
  return pool.size();
}

/// Number of chunks parallel_chunks will use for n items.
inline std::size_t chunk_count(std::size_t n, std::size_t min_chunk = 4096) {
  const std::size_t workers = std::min<std::size_t>(
      thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) return 1;
  const std::size_t step = (n + workers - 1) / workers;
  return (n + step - 1) / step;
}

/// All c-subsets of {0..n-1} as bitmasks, in increasing numeric order.
inline std::vector<std::uint32_t> subsets_of_size(int n, int c) {
  std::vector<std::uint32_t> out;
  if (c < 0 || c > n) return out;
  if (c == 0) return {0u};
  std::uint64_t v = (std::uint64_t{1} << c) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (v < limit) {
    out.push_back(static_cast<std::uint32_t>(v));
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(v) + 1));
  }
  return out;
}

}  // namespace hamlb
