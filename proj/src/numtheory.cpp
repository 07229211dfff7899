#include "probeattack/numtheory.hpp"

#include <numeric>
#include <stdexcept>

namespace probeattack::numtheory {

u64 modpow(u64 base, u64 exponent, u64 modulus) {
  if (modulus < 2) throw std::invalid_argument("modpow: modulus must be at least 2");
  u128 acc = 1;
  u128 b = base % modulus;
  while (exponent > 0) {
    if (exponent & 1) acc = acc * b % modulus;
    b = b * b % modulus;
    exponent >>= 1;
  }
  return static_cast<u64>(acc);
}

std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<std::pair<u64, int>> factors;
  for (u64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    factors.emplace_back(p, e);
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

u64 euler_phi(u64 n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n must be positive");
  u64 phi = n;
  for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

u64 multiplicative_order(u64 y, u64 n) {
  if (n < 2) throw std::invalid_argument("multiplicative_order: modulus must be at least 2");
  y %= n;
  if (std::gcd(y, n) != 1)
    throw std::invalid_argument("multiplicative_order: base and modulus are not coprime");
  // The order divides phi(n); start there and strip primes while y^(order/p) stays 1.
  u64 order = euler_phi(n);
  for (const auto& [p, e] : factorize(order)) {
    (void)e;
    while (order % p == 0 && modpow(y, order / p, n) == 1) order /= p;
  }
  return order;
}

std::vector<Fraction> convergents(u64 numerator, u64 denominator) {
  if (denominator == 0)
    throw std::invalid_argument("convergents: denominator must be positive");
  std::vector<Fraction> out;
  // Euclid supplies the partial quotients; h/k follow the standard recurrence
  // h_j = t_j h_{j-1} + h_{j-2}, k_j likewise.
  u64 h1 = 1, h2 = 0;
  u64 k1 = 0, k2 = 1;
  u64 a = numerator, b = denominator;
  while (b != 0) {
    const u64 t = a / b;
    const u64 h = t * h1 + h2;
    const u64 k = t * k1 + k2;
    out.push_back(Fraction{h, k});
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const u64 rem = a % b;
    a = b;
    b = rem;
  }
  if (out.empty()) out.push_back(Fraction{0, 1});  // numerator == 0 edge
  return out;
}

std::optional<u64> recover_period(u64 c, u64 q, u64 n, u64 y) {
  if (c == 0 || q < 2 || n < 2) return std::nullopt;
  // At most one convergent denominator below n can satisfy the 1/(2q) window
  // once q >= n^2, so keeping the last qualifying one is exact.
  std::optional<u64> candidate;
  for (const Fraction& f : convergents(c, q)) {
    if (f.den >= n) break;  // denominators never decrease
    const u128 lhs = static_cast<u128>(c) * f.den;
    const u128 rhs = static_cast<u128>(f.num) * q;
    const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (2 * diff <= f.den) candidate = f.den;
  }
  if (!candidate) return std::nullopt;
  const u64 d = *candidate;
  if (modpow(y, d, n) != 1) return std::nullopt;
  for (const auto& [p, e] : factorize(d)) {
    (void)e;
    if (modpow(y, d / p, n) == 1) return std::nullopt;  // d is a proper multiple of the order
  }
  return d;
}

FactorResult factor_from_period(u64 n, u64 y, u64 r) {
  if (r == 0 || modpow(y, r, n) != 1)
    throw std::invalid_argument("factor_from_period: r is not a period of y mod n");
  FactorResult result;
  if (r % 2 != 0) {
    result.failure = FactorFailure::odd_period;
    return result;
  }
  const u64 x = modpow(y, r / 2, n);
  if (x == 1 || x == n - 1) {
    result.failure = FactorFailure::trivial_root;
    return result;
  }
  result.factors = {std::gcd(x - 1, n), std::gcd(x + 1, n)};
  return result;
}

}  // namespace probeattack::numtheory
