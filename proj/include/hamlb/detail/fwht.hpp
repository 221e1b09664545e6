#pragma once

#include <cstddef>
#include <span>

#include "hamlb/common.hpp"

namespace hamlb::detail {

/// Unnormalized Walsh-Hadamard butterfly: v[s] <- sum_b v[b] (-1)^{|s & b|}.
/// v.size() must be a power of two.
inline void fwht_inplace(std::span<double> v) {
  const std::size_t size = v.size();
  const std::size_t pairs = size / 2;
  for (std::size_t h = 1; h < size; h <<= 1) {
    parallel_chunks(
        pairs,
        [&](std::size_t begin, std::size_t end, std::size_t) {
          for (std::size_t p = begin; p < end; ++p) {
            const std::size_t j = (p / h) * 2 * h + (p % h);
            const double a = v[j];
            const double b = v[j + h];
            v[j] = a + b;
            v[j + h] = a - b;
          }
        },
        std::size_t{1} << 16);
  }
}

}  // namespace hamlb::detail
