#include "probeattack/shor_spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "probeattack/numtheory.hpp"

namespace probeattack::shor {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_prime(u64 n) {
  if (n < 2) return false;
  const auto f = numtheory::factorize(n);
  return f.size() == 1 && f.front().second == 1;
}

}  // namespace

ShorInstance build_instance(u64 N, u64 y, u64 l) {
  if (N < 9 || N % 2 == 0)
    throw std::invalid_argument("build_instance: N must be an odd composite >= 9");
  if (N > (u64(1) << 31))
    throw std::invalid_argument("build_instance: N above 2^31 is not supported");
  if (is_prime(N)) throw std::invalid_argument("build_instance: N must be composite");
  if (y < 2 || y >= N) throw std::invalid_argument("build_instance: y must lie in [2, N-1]");
  if (std::gcd(y, N) != 1)
    throw std::invalid_argument("build_instance: y must be coprime to N");

  ShorInstance inst;
  inst.N = N;
  inst.y = y;
  inst.r = numtheory::multiplicative_order(y, N);
  if (l >= inst.r) throw std::invalid_argument("build_instance: l must satisfy 0 <= l < r");
  inst.l = l;

  const u64 nsq = N * N;
  int L = 0;
  while ((u64(1) << L) < nsq) ++L;
  inst.L = L;
  inst.q = u64(1) << L;
  inst.A = (inst.q - 1 - inst.l) / inst.r;
  return inst;
}

ShorInstance synthetic_instance(u64 q, u64 r, u64 l) {
  if (q < 2 || !std::has_single_bit(q))
    throw std::invalid_argument("synthetic_instance: q must be a power of two >= 2");
  if (r == 0 || r >= q) throw std::invalid_argument("synthetic_instance: need 1 <= r < q");
  if (l >= r) throw std::invalid_argument("synthetic_instance: l must satisfy 0 <= l < r");
  ShorInstance inst;
  inst.L = std::countr_zero(q);
  inst.q = q;
  inst.r = r;
  inst.l = l;
  inst.A = (q - 1 - l) / r;
  return inst;
}

double prob_c(const ShorInstance& inst, u64 c) {
  if (c >= inst.q) throw std::invalid_argument("prob_c: c out of range");
  const u64 m = static_cast<u64>(static_cast<u128>(inst.r) * c % inst.q);
  const double qd = static_cast<double>(inst.q);
  const double terms = static_cast<double>(inst.A + 1);
  if (m == 0) return terms / qd;  // all A+1 phasors aligned
  // sin((A+1)*pi*m/q) vanishes exactly when q divides (A+1)*m; detecting that
  // in integers keeps off-peak bins of r | q instances at exactly zero.
  const u128 knum = static_cast<u128>(inst.A + 1) * m;
  if (knum % inst.q == 0) return 0.0;
  // Reduce both angles in integer arithmetic so the sin arguments stay small.
  const u64 kred = static_cast<u64>(knum % (2 * inst.q));
  const double num = std::sin(kPi * static_cast<double>(kred) / qd);
  const double den = std::sin(kPi * static_cast<double>(m) / qd);
  const double ratio = num / den;
  return ratio * ratio / (qd * terms);
}

std::vector<u64> period_revealing_set(const ShorInstance& inst) {
  std::vector<u64> S;
  S.reserve(inst.r);
  for (u64 cp = 0; cp < inst.r; ++cp) {
    // Candidates within 1/2 of cp*q/r; the window has length 1, so at most
    // the two neighbouring integers can qualify.
    const u64 base = static_cast<u64>(static_cast<u128>(cp) * inst.q / inst.r);
    for (const u64 c : {base, base + 1}) {
      if (c >= inst.q) continue;
      const u128 lhs = static_cast<u128>(inst.r) * c;
      const u128 rhs = static_cast<u128>(cp) * inst.q;
      const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
      if (2 * diff <= inst.r) S.push_back(c);
    }
  }
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  return S;
}

double miss_probability(const ShorInstance& inst) {
  double hit = 0.0;
  for (const u64 c : period_revealing_set(inst)) hit += prob_c(inst, c);
  return std::clamp(1.0 - hit, 0.0, 1.0);
}

Spectrum build_spectrum(const ShorInstance& inst) {
  Spectrum spec;
  spec.instance = inst;
  spec.probs.resize(inst.q);
  for (u64 c = 0; c < inst.q; ++c) spec.probs[c] = prob_c(inst, c);
  spec.revealing = period_revealing_set(inst);
  double hit = 0.0;
  for (const u64 c : spec.revealing) hit += spec.probs[c];
  spec.miss = std::clamp(1.0 - hit, 0.0, 1.0);
  return spec;
}

std::vector<double> brute_force_spectrum(const ShorInstance& inst) {
  if (inst.q > (u64(1) << 16))
    throw resource_error("brute_force_spectrum: capped at q <= 2^16");
  const u64 q = inst.q;
  std::vector<std::complex<double>> root(q);
  for (u64 k = 0; k < q; ++k)
    root[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(q));
  std::vector<double> probs(q);
  const double norm = 1.0 / (static_cast<double>(q) * static_cast<double>(inst.A + 1));
  for (u64 c = 0; c < q; ++c) {
    std::complex<double> amp{0.0, 0.0};
    for (u64 j = 0; j <= inst.A; ++j) {
      const u64 a = j * inst.r + inst.l;
      amp += root[static_cast<u64>(static_cast<u128>(a) * c % q)];
    }
    probs[c] = std::norm(amp) * norm;
  }
  return probs;
}

SpectrumSampler::SpectrumSampler(const ShorInstance& inst) : cdf_(inst.q) {
  double acc = 0.0;
  for (u64 c = 0; c < inst.q; ++c) {
    acc += prob_c(inst, c);
    cdf_[c] = acc;
  }
  // The mass sums to 1 up to rounding; pin the last edge so a draw of
  // u close to 1 cannot fall off the table.
  cdf_.back() = std::max(cdf_.back(), 1.0);
}

u64 SpectrumSampler::draw(Rng& rng) const {
  const double u = rng.uniform01();
  return static_cast<u64>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

u64 sample_l(u64 N, u64 y, Rng& rng) {
  const ShorInstance inst = build_instance(N, y, 0);
  return rng.uniform(inst.q) % inst.r;
}

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

double simpson_recurse(double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = sinc(lm);
  const double frm = sinc(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_sinc(double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = sinc(a);
  const double fm = sinc(m);
  const double fb = sinc(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double si(double x) {
  if (!(x >= 0.0) || x > 1000.0)
    throw std::invalid_argument("si: x must lie in [0, 1000]");
  // Integrate half-period panels so the adaptive rule never straddles many
  // oscillations of the integrand.
  double total = 0.0;
  double a = 0.0;
  while (a < x) {
    const double b = std::min(x, a + kPi);
    total += integrate_sinc(a, b, 1e-12);
    a = b;
  }
  return total;
}

double analytic_miss() {
  return 1.0 - (2.0 / (kPi * kPi)) * (kPi * si(kPi) - 2.0);
}

std::vector<Table1Row> table1(const std::vector<std::pair<u64, u64>>& pairs) {
  std::vector<Table1Row> rows;
  rows.reserve(pairs.size());
  for (const auto& [N, y] : pairs) {
    Table1Row row;
    row.N = N;
    row.y = y;
    try {
      const ShorInstance inst = build_instance(N, y, 0);
      row.L = inst.L;
      row.phi = numtheory::euler_phi(N);
      row.r = inst.r;
      row.A = inst.A;
      row.P = miss_probability(inst);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

const std::vector<std::pair<u64, u64>>& default_table1_pairs() {
  static const std::vector<std::pair<u64, u64>> pairs = {
      {21, 2},   {33, 2},   {35, 2},   {55, 2},   {77, 2},    {119, 3},
      {143, 2},  {187, 3},  {221, 3},  {247, 2},  {323, 3},   {391, 3},
      {437, 2},  {551, 2},  {667, 2},  {713, 3},  {899, 3},   {1073, 2},
      {1147, 2}, {1271, 3}, {1517, 2}, {1517, 16}, {1591, 2}, {1591, 9},
      {1763, 5}, {1763, 10}, {1927, 6}, {1927, 16}, {2021, 3}, {2021, 4},
  };
  return pairs;
}

}  // namespace probeattack::shor
