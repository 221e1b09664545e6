#include "hamlb/combinatorics.hpp"

#include <algorithm>

#include "hamlb/common.hpp"

namespace hamlb {

BinomTable::BinomTable(int max_n) {
  require(max_n >= 0, "BinomTable: max_n must be >= 0");
  rows_.resize(static_cast<std::size_t>(max_n) + 1);
  for (int a = 0; a <= max_n; ++a) {
    auto& row = rows_[static_cast<std::size_t>(a)];
    row.resize(static_cast<std::size_t>(a) + 1);
    row.front() = 1;
    row.back() = 1;
    for (int b = 1; b < a; ++b) {
      const auto& prev = rows_[static_cast<std::size_t>(a) - 1];
      row[static_cast<std::size_t>(b)] =
          prev[static_cast<std::size_t>(b) - 1] + prev[static_cast<std::size_t>(b)];
    }
  }
}

const BigInt& BinomTable::operator()(int a, int b) const {
  require(a <= max_n(), "BinomTable: row " + std::to_string(a) + " beyond table");
  if (a < 0 || b < 0 || b > a) return zero_;
  return rows_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

void ZtQuery::validate() const {
  require(n >= 0 && n <= kMaxPartitionN, "ZtQuery: n must be in [0, 1000]");
  require(k >= 0 && k <= n, "ZtQuery: k must be in [0, n]");
  require(c >= 0 && c <= n, "ZtQuery: c must be in [0, n]");
  require(t >= 0 && t <= c, "ZtQuery: t must be in [0, c]");
  require(2 * c - t <= n, "ZtQuery: |A u B| = 2c - t must not exceed n");
}

namespace {

BigInt z_enumerate(const ZtQuery& q, const BinomTable& binom) {
  require(q.n <= 62, "z_count(enumerate): n must be <= 62");
  require(binom(q.n, q.k) <= kMaxEnumeratedSubsets,
          "z_count(enumerate): C(n, k) exceeds the enumeration guard");
  const std::uint64_t a_mask = (std::uint64_t{1} << q.c) - 1;
  const std::uint64_t b_mask = ((std::uint64_t{1} << q.c) - 1) << (q.c - q.t);
  long long count = 0;
  if (q.k == 0) return BigInt(0);  // the empty set has even intersections
  std::uint64_t v = (std::uint64_t{1} << q.k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << q.n;
  while (v < limit) {
    if ((popcount(v & a_mask) & 1) && (popcount(v & b_mask) & 1)) ++count;
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(v) + 1));
  }
  return BigInt(count);
}

BigInt z_partition(const ZtQuery& q, const BinomTable& binom) {
  // i, p, q_, r: sizes of S within A&B, A\B, B\A and the complement of A u B.
  const int only = q.c - q.t;
  const int rest = q.n - 2 * q.c + q.t;
  BigInt total = 0;
  for (int i = 0; i <= std::min(q.t, q.k); ++i) {
    for (int p = 0; p <= std::min(only, q.k - i); ++p) {
      if (((i + p) & 1) == 0) continue;
      for (int qq = 0; qq <= std::min(only, q.k - i - p); ++qq) {
        if (((i + qq) & 1) == 0) continue;
        const int r = q.k - i - p - qq;
        if (r > rest) continue;
        total += binom(q.t, i) * binom(only, p) * binom(only, qq) * binom(rest, r);
      }
    }
  }
  return total;
}

Rational pow4(int e) {
  Rational out = 1;
  if (e >= 0) {
    for (int i = 0; i < e; ++i) out *= 4;
  } else {
    for (int i = 0; i < -e; ++i) out /= 4;
  }
  return out;
}

}  // namespace

BigInt z_count(const ZtQuery& q, ZMethod method, const BinomTable& binom) {
  q.validate();
  require(binom.max_n() >= q.n, "z_count: binomial table too small");
  return method == ZMethod::enumerate ? z_enumerate(q, binom) : z_partition(q, binom);
}

SimpleIdentityResult verify_simple_identity(int l, int t, const BinomTable& binom) {
  require(t >= 0 && t <= l, "verify_simple_identity: need 0 <= t <= l");
  SimpleIdentityResult res{l, t, BigInt(0), false};
  for (int r = t; r <= l; ++r) {
    const BigInt term = binom(r, t) * binom(l, r);
    if ((r - t) % 2 == 0) {
      res.sum += term;
    } else {
      res.sum -= term;
    }
  }
  res.pass = res.sum == BigInt(l == t ? 1 : 0);
  return res;
}

Rational complex_identity_rhs(int n, int k, int c, int r, const BinomTable& binom) {
  BigInt sum = 0;
  for (int s = 0; s <= k - r; ++s) {
    const BigInt term = binom(2 * c - 2 * r, s) * binom(n - 2 * c, k - r - s);
    if (s % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return pow4(r - 1) * Rational(sum);
}

BigInt complex_identity_lhs(int n, int k, int c, int r, ZMethod method, const BinomTable& binom) {
  BigInt sum = 0;
  for (int t = 0; t <= r; ++t) {
    const BigInt term = binom(r, t) * z_count({n, k, c, t}, method, binom);
    if ((r - t) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

namespace {

void check_complex_ranges(int n, int k, int c, int r) {
  require(c >= 0 && 2 * c <= n, "complex identity: need 0 <= c <= n/2");
  require(k >= 0 && k <= n, "complex identity: need 0 <= k <= n");
  require(r >= 0 && r <= c, "complex identity: need 0 <= r <= c");
}

bool enumeration_feasible(int n, int k, const BinomTable& binom) {
  return n <= 62 && binom(n, k) <= kMaxEnumeratedSubsets;
}

}  // namespace

ComplexIdentityResult verify_complex_identity(int n, int k, int c, int r, const BinomTable& binom,
                                              bool cross_check) {
  check_complex_ranges(n, k, c, r);
  ComplexIdentityResult res;
  res.n = n;
  res.k = k;
  res.c = c;
  res.r = r;
  res.lhs = complex_identity_lhs(n, k, c, r, ZMethod::partition_sum, binom);
  if (cross_check && enumeration_feasible(n, k, binom)) {
    for (int t = 0; t <= r; ++t) {
      const ZtQuery q{n, k, c, t};
      if (z_count(q, ZMethod::enumerate, binom) != z_count(q, ZMethod::partition_sum, binom)) {
        res.methods_agree = false;
      }
    }
  }
  res.rhs = complex_identity_rhs(n, k, c, r, binom);
  res.pass = res.methods_agree && Rational(res.lhs) == res.rhs;
  return res;
}

NonnegativityResult verify_alternating_nonnegativity(int n, int k, int c, const BinomTable& binom) {
  NonnegativityResult res;
  res.n = n;
  res.k = k;
  res.c = c;
  res.pass = true;
  for (int r = 0; r <= c; ++r) {
    check_complex_ranges(n, k, c, r);
    res.rhs_by_r.push_back(complex_identity_rhs(n, k, c, r, binom));
    res.lhs_by_r.push_back(complex_identity_lhs(n, k, c, r, ZMethod::partition_sum, binom));
    if (res.rhs_by_r.back() < 0) res.pass = false;
  }
  return res;
}

NonnegativityThreshold nonnegativity_threshold(int k, int c, int n_max, const BinomTable& binom) {
  NonnegativityThreshold out;
  out.k = k;
  out.c = c;
  out.n_max = n_max;
  const int n_min = std::max(2 * c, k);
  for (int n = n_min; n <= n_max; ++n) {
    if (!verify_alternating_nonnegativity(n, k, c, binom).pass) out.violating_n.push_back(n);
  }
  if (n_max >= n_min) {
    out.min_n = out.violating_n.empty() ? n_min : out.violating_n.back() + 1;
    if (out.min_n > n_max) out.min_n = -1;
  }
  return out;
}

bool verify_reconstruction(int n, int k, int c, const BinomTable& binom) {
  require(2 * c <= n && k <= n, "verify_reconstruction: need 2c <= n and k <= n");
  std::vector<BigInt> z;
  for (int t = 0; t <= c; ++t) z.push_back(z_count({n, k, c, t}, ZMethod::partition_sum, binom));
  std::vector<BigInt> weight;
  for (int r = 0; r <= c; ++r) {
    BigInt w = 0;
    for (int t = 0; t <= r; ++t) {
      const BigInt term = binom(r, t) * z[static_cast<std::size_t>(t)];
      if ((r - t) % 2 == 0) {
        w += term;
      } else {
        w -= term;
      }
    }
    weight.push_back(w);
  }
  for (int l = 0; l <= c; ++l) {
    BigInt sum = 0;
    for (int r = 0; r <= c; ++r) sum += weight[static_cast<std::size_t>(r)] * binom(l, r);
    if (sum != z[static_cast<std::size_t>(l)]) return false;
  }
  return true;
}

IdentitySweepReport run_identity_sweep(int max_l, int max_n, int max_c) {
  require(max_l >= 0 && max_n >= 0 && max_c >= 0, "run_identity_sweep: negative bound");
  const BinomTable binom(std::max({max_l, max_n, 1}));
  IdentitySweepReport rep;
  rep.max_l = max_l;
  rep.max_n = max_n;
  rep.max_c = max_c;

  for (int l = 0; l <= max_l; ++l) {
    for (int t = 0; t <= l; ++t) {
      ++rep.simple_checked;
      if (!verify_simple_identity(l, t, binom).pass) ++rep.simple_failed;
    }
  }
  for (int c = 1; c <= max_c; ++c) {
    for (int k = (3 * c + 1) / 2; k <= 3 * c; ++k) {
      for (int n = std::max(2 * c, k); n <= max_n; ++n) {
        for (int r = 0; r <= c; ++r) {
          ComplexIdentityResult res = verify_complex_identity(n, k, c, r, binom, true);
          ++rep.complex_checked;
          if (r == 0) ++rep.complex_checked_r0;
          if (!res.methods_agree) ++rep.method_disagreements;
          if (!res.pass) {
            ++rep.complex_failed;
            if (r == 0) ++rep.complex_failed_r0;
            rep.complex_failures.push_back(std::move(res));
          }
        }
        if (!verify_reconstruction(n, k, c, binom)) ++rep.reconstruction_failed;
      }
      rep.thresholds.push_back(nonnegativity_threshold(k, c, max_n, binom));
    }
  }
  return rep;
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace hamlb
