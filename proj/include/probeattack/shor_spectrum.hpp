#pragma once

#include <string>
#include <utility>
#include <vector>

#include "probeattack/common.hpp"
#include "probeattack/rng.hpp"

namespace probeattack::shor {

/// One period-finding instance. After the second register collapses on a
/// residue l, the first register holds equal amplitude on a = j*r + l for
/// j = 0..A, with A the largest j keeping a <= q-1.
struct ShorInstance {
  u64 N = 0;  // modulus being factored; 0 for synthetic instances
  u64 y = 0;  // base, coprime to N; 0 for synthetic instances
  int L = 0;  // register width, q = 2^L
  u64 q = 0;
  u64 r = 0;  // multiplicative order of y mod N
  u64 l = 0;  // collapsed residue, 0 <= l < r
  u64 A = 0;  // floor((q - 1 - l) / r)
};

/// Validates N (odd composite >= 9), y (in [2, N-1], coprime), l < r, picks
/// the smallest L with 2^L >= N^2 and fills in r and A.
ShorInstance build_instance(u64 N, u64 y, u64 l);

/// Instance with prescribed (q, r, l) and no factoring semantics. Used for
/// reduced-size spectra (q power of two, r < q). N and y stay 0.
ShorInstance synthetic_instance(u64 q, u64 r, u64 l);

/// Probability of measuring c on the first register. Closed form of the
/// geometric sum: with theta = 2*pi*((r*c) mod q)/q,
///   Prob(c) = sin^2((A+1)*theta/2) / (sin^2(theta/2) * q * (A+1)),
/// and the removable singularity at theta = 0 evaluates to (A+1)/q.
/// Angles are reduced in integer arithmetic first, so the value is exact
/// where the sum is exactly zero (e.g. off-peak bins when r divides q).
double prob_c(const ShorInstance& inst, u64 c);

/// The period-revealing set S: all c whose centered residue of r*c mod q
/// lies in [-r/2, r/2]. Exactly one such c exists near each multiple c'*q/r,
/// so |S| = r for power-of-two q.
std::vector<u64> period_revealing_set(const ShorInstance& inst);

/// Miss probability P = 1 - sum over S of Prob(c): the chance a single run
/// lands outside the period-revealing set. Needs only |S| closed-form
/// evaluations, not the full spectrum.
double miss_probability(const ShorInstance& inst);

/// Fully materialized spectrum, for emission and sampling.
struct Spectrum {
  ShorInstance instance;
  std::vector<double> probs;     // size q
  std::vector<u64> revealing;    // S, ascending
  double miss = 0.0;             // P
};
Spectrum build_spectrum(const ShorInstance& inst);

/// Literal DFT cross-check: evaluates |sum_j exp(2*pi*i*(j*r+l)*c/q)|^2 term
/// by term for every c. Independent of prob_c's closed form. q <= 2^16.
std::vector<double> brute_force_spectrum(const ShorInstance& inst);

/// Inverse-CDF sampler over the spectrum; the cumulative table is built once
/// and reused across draws. One uniform01() per draw.
class SpectrumSampler {
 public:
  explicit SpectrumSampler(const ShorInstance& inst);
  u64 draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

/// One draw of the collapsed residue l. Its law is (A_l + 1)/q, which is
/// exactly the law of (uniform a in [0, q)) mod r.
u64 sample_l(u64 N, u64 y, Rng& rng);

/// Sine integral Si(x) = integral of sin(t)/t over [0, x], by adaptive
/// Simpson quadrature on half-period panels. Absolute accuracy ~1e-10.
/// Domain [0, 1000].
double si(double x);

/// Large-N limit of the miss probability: 1 - (2/pi^2)*(pi*Si(pi) - 2).
double analytic_miss();

/// One row of the survey table over (N, y) pairs.
struct Table1Row {
  u64 N = 0;
  int L = 0;
  u64 phi = 0;
  u64 y = 0;
  u64 r = 0;
  u64 A = 0;
  double P = 0.0;
  std::string error;  // nonempty when the row could not be computed
  bool ok() const { return error.empty(); }
};

/// Computes L, phi(N), r, A and P for each (N, y) pair with l = 0.
/// A bad pair produces a row carrying an error message instead of aborting
/// the whole table.
std::vector<Table1Row> table1(const std::vector<std::pair<u64, u64>>& pairs);

/// The 30 built-in survey pairs, N from 21 to 2021.
const std::vector<std::pair<u64, u64>>& default_table1_pairs();

}  // namespace probeattack::shor
