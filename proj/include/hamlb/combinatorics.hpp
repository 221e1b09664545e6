#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hamlb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact binomial coefficients C(a, b) for 0 <= a <= max_n (Pascal's rule).
class BinomTable {
 public:
  explicit BinomTable(int max_n);

  int max_n() const { return static_cast<int>(rows_.size()) - 1; }

  /// C(a, b); zero when b < 0 or b > a.
  const BigInt& operator()(int a, int b) const;

 private:
  std::vector<std::vector<BigInt>> rows_;
  BigInt zero_{0};
};

/// z_t = #{S : |S| = k, |S & A| and |S & B| both odd} for |A| = |B| = c and
/// |A & B| = t.
struct ZtQuery {
  int n = 0;
  int k = 0;
  int c = 0;
  int t = 0;

  void validate() const;
};

enum class ZMethod { enumerate, partition_sum };

inline constexpr long long kMaxEnumeratedSubsets = 10'000'000;
inline constexpr int kMaxPartitionN = 1000;

BigInt z_count(const ZtQuery& q, ZMethod method, const BinomTable& binom);

struct SimpleIdentityResult {
  int l = 0;
  int t = 0;
  BigInt sum;   ///< sum_{r=t}^{l} (-1)^{r-t} C(r,t) C(l,r)
  bool pass = false;
};

SimpleIdentityResult verify_simple_identity(int l, int t, const BinomTable& binom);

/// 4^{r-1} sum_{s=0}^{k-r} (-1)^s C(2c-2r, s) C(n-2c, k-r-s), exactly.
Rational complex_identity_rhs(int n, int k, int c, int r, const BinomTable& binom);

/// sum_{t=0}^{r} (-1)^{r-t} C(r,t) z_t, exactly.
BigInt complex_identity_lhs(int n, int k, int c, int r, ZMethod method, const BinomTable& binom);

struct ComplexIdentityResult {
  int n = 0, k = 0, c = 0, r = 0;
  BigInt lhs;
  Rational rhs;
  bool methods_agree = true;  ///< enumeration and partition-sum z_t match
  bool pass = false;          ///< lhs == rhs and methods agree
};

/// cross_check runs enumeration alongside the partition sum when feasible.
ComplexIdentityResult verify_complex_identity(int n, int k, int c, int r, const BinomTable& binom,
                                              bool cross_check = true);

struct NonnegativityResult {
  int n = 0, k = 0, c = 0;
  std::vector<Rational> rhs_by_r;  ///< r = 0..c
  std::vector<BigInt> lhs_by_r;    ///< r = 0..c, the actual alternating sums
  bool pass = false;               ///< every rhs_by_r >= 0
};

NonnegativityResult verify_alternating_nonnegativity(int n, int k, int c, const BinomTable& binom);

struct NonnegativityThreshold {
  int k = 0;
  int c = 0;
  int n_max = 0;
  /// Smallest n0 with nonnegativity for every n in [n0, n_max]; -1 if none.
  int min_n = -1;
  std::vector<int> violating_n;
};

NonnegativityThreshold nonnegativity_threshold(int k, int c, int n_max, const BinomTable& binom);

/// z_l == sum_{r=0}^{c} (sum_{t<=r} (-1)^{r-t} C(r,t) z_t) C(l,r) for every l <= c.
bool verify_reconstruction(int n, int k, int c, const BinomTable& binom);

struct IdentitySweepReport {
  int max_l = 0;
  int max_n = 0;
  int max_c = 0;
  long simple_checked = 0;
  long simple_failed = 0;
  long complex_checked = 0;
  long complex_failed = 0;
  long complex_checked_r0 = 0;
  long complex_failed_r0 = 0;
  long method_disagreements = 0;
  long reconstruction_failed = 0;
  std::vector<ComplexIdentityResult> complex_failures;
  std::vector<NonnegativityThreshold> thresholds;

  bool all_pass() const {
    return simple_failed == 0 && complex_failed == 0 && method_disagreements == 0 &&
           reconstruction_failed == 0;
  }
};

/// Simple identity for 0 <= t <= l <= max_l; complex identity and the
/// reconstruction for 2c <= n <= max_n, 1 <= c <= max_c,
/// ceil(3c/2) <= k <= min(3c, n), 0 <= r <= c.
IdentitySweepReport run_identity_sweep(int max_l, int max_n, int max_c);

std::string to_string(const Rational& q);

}  // namespace hamlb
