#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "probeattack/common.hpp"

namespace probeattack::numtheory {

/// Reduced nonnegative fraction. Convergents produced below are always in
/// lowest terms by construction.
struct Fraction {
  u64 num = 0;
  u64 den = 1;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// base^exponent mod modulus with 128-bit intermediates. modulus >= 2.
u64 modpow(u64 base, u64 exponent, u64 modulus);

/// Trial-division factorization, (prime, exponent) pairs in ascending order.
/// Intended for desk-scale inputs (n up to ~2^32).
std::vector<std::pair<u64, int>> factorize(u64 n);

/// Euler totient. n >= 1.
u64 euler_phi(u64 n);

/// Smallest r >= 1 with y^r = 1 (mod n). Computed by factoring phi(n) and
/// descending through prime quotients. Throws if gcd(y, n) != 1.
u64 multiplicative_order(u64 y, u64 n);

/// Continued-fraction convergents of numerator/denominator, in order,
/// ending with the fraction itself in lowest terms. denominator >= 1.
std::vector<Fraction> convergents(u64 numerator, u64 denominator);

/// Order recovery from one measured value c out of q = 2^L bins.
/// Scans the convergents p/d of c/q for the unique denominator d < n with
/// |c/q - p/d| <= 1/(2q), then accepts d only if it is verified as the exact
/// multiplicative order of y mod n (y^d = 1 and no prime quotient of d works;
/// a bare y^d = 1 check would accept multiples of the order). c = 0 and
/// degenerate convergents fail rather than reporting a period of 1.
std::optional<u64> recover_period(u64 c, u64 q, u64 n, u64 y);

enum class FactorFailure { odd_period, trivial_root };

struct FactorResult {
  std::optional<std::pair<u64, u64>> factors;
  std::optional<FactorFailure> failure;
  bool ok() const { return factors.has_value(); }
};

/// Classical tail of the factoring algorithm: from a verified period r of
/// y mod n, try gcd(y^(r/2) -+ 1, n). Requires y^r = 1 (mod n).
/// Fails when r is odd or y^(r/2) = -+1 (mod n).
FactorResult factor_from_period(u64 n, u64 y, u64 r);

}  // namespace probeattack::numtheory
