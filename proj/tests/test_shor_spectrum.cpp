#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "probeattack/numtheory.hpp"
#include "probeattack/rng.hpp"
#include "probeattack/shor_spectrum.hpp"

using namespace probeattack;
using namespace probeattack::shor;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for the sine integral: its power series
// sum (-1)^k x^(2k+1) / ((2k+1) (2k+1)!), valid and fast for x <= 4.
double si_series(double x) {
  double sum = 0.0;
  double factorial = 1.0;  // (2k+1)!
  for (int k = 0; k <= 40; ++k) {
    const int m = 2 * k + 1;
    if (k > 0) factorial *= (2.0 * k) * (2.0 * k + 1.0);
    const double term = (k % 2 ? -1.0 : 1.0) * std::pow(x, m) / (m * factorial);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// Fixed-step Simpson rule for smooth integrands on [a, b].
template <typename F>
double simpson(F f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("build_instance fills in the N=21 and N=33 parameters") {
  const auto i21 = build_instance(21, 2, 0);
  CHECK(i21.L == 9);
  CHECK(i21.q == 512);
  CHECK(i21.r == 6);
  CHECK(i21.A == 85);

  const auto i33 = build_instance(33, 2, 0);
  CHECK(i33.L == 11);
  CHECK(i33.q == 2048);
  CHECK(i33.r == 10);
  CHECK(i33.A == 204);
}

TEST_CASE("build_instance validates its inputs") {
  CHECK_THROWS_AS(build_instance(15, 4, 2), std::invalid_argument);  // l >= r (order is 2)
  CHECK_THROWS_AS(build_instance(16, 3, 0), std::invalid_argument);  // even N
  CHECK_THROWS_AS(build_instance(37, 2, 0), std::invalid_argument);  // prime N
  CHECK_THROWS_AS(build_instance(21, 7, 0), std::invalid_argument);  // gcd(7, 21) = 7
  CHECK_THROWS_AS(build_instance(21, 1, 0), std::invalid_argument);  // y < 2
  CHECK_THROWS_AS(build_instance(21, 21, 0), std::invalid_argument); // y out of range
  CHECK_THROWS_AS(build_instance(7, 2, 0), std::invalid_argument);   // N < 9
}

TEST_CASE("synthetic_instance accepts reduced shapes only") {
  const auto s = synthetic_instance(16, 4, 0);
  CHECK(s.q == 16);
  CHECK(s.A == 3);
  CHECK_THROWS_AS(synthetic_instance(12, 4, 0), std::invalid_argument);  // q not a power of 2
  CHECK_THROWS_AS(synthetic_instance(16, 16, 0), std::invalid_argument); // r >= q
  CHECK_THROWS_AS(synthetic_instance(16, 4, 4), std::invalid_argument);  // l >= r
}

TEST_CASE("prob_c peak value, normalization and range check") {
  const auto inst = build_instance(21, 2, 0);
  CHECK(prob_c(inst, 0) == doctest::Approx(86.0 / 512.0).epsilon(1e-14));
  double total = 0.0;
  for (u64 c = 0; c < inst.q; ++c) total += prob_c(inst, c);
  CHECK(std::abs(total - 1.0) < 1e-9);
  CHECK_THROWS_AS(prob_c(inst, 512), std::invalid_argument);
}

TEST_CASE("spectrum normalizes to 1 for every survey instance") {
  for (const auto& [N, y] : default_table1_pairs()) {
    const auto inst = build_instance(N, y, 0);
    double total = 0.0;
    for (u64 c = 0; c < inst.q; ++c) total += prob_c(inst, c);
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("closed form matches the literal DFT sum at 1e-12") {
  for (const auto& [N, y] : {std::pair<u64, u64>{21, 2}, {33, 2}}) {
    const auto inst = build_instance(N, y, 0);
    const auto brute = brute_force_spectrum(inst);
    for (u64 c = 0; c < inst.q; ++c)
      CHECK(std::abs(prob_c(inst, c) - brute[c]) < 1e-12);
  }
  const auto synth = synthetic_instance(512, 6, 3);
  const auto brute = brute_force_spectrum(synth);
  for (u64 c = 0; c < synth.q; ++c)
    CHECK(std::abs(prob_c(synth, c) - brute[c]) < 1e-12);
}

TEST_CASE("brute_force_spectrum is capped at q = 2^16") {
  CHECK_THROWS_AS(brute_force_spectrum(synthetic_instance(u64(1) << 17, 6, 0)),
                  resource_error);
}

TEST_CASE("collapsed residue only shifts phases: equal-A instances share magnitudes") {
  // For q = 512, r = 6 the count A+1 is 86 for l in {0, 1} and 85 for l in
  // {2..5}; within each group the spectra must coincide.
  const auto l0 = brute_force_spectrum(synthetic_instance(512, 6, 0));
  const auto l1 = brute_force_spectrum(synthetic_instance(512, 6, 1));
  for (u64 c = 0; c < 512; ++c) CHECK(std::abs(l0[c] - l1[c]) < 1e-12);

  const auto l2 = miss_probability(synthetic_instance(512, 6, 2));
  for (u64 l : {u64(3), u64(4), u64(5)})
    CHECK(std::abs(miss_probability(synthetic_instance(512, 6, l)) - l2) < 1e-12);
  CHECK(std::abs(miss_probability(synthetic_instance(512, 6, 0)) -
                 miss_probability(synthetic_instance(512, 6, 1))) < 1e-12);
}

TEST_CASE("period-revealing set of the N=21 instance") {
  const auto inst = build_instance(21, 2, 0);
  const std::vector<u64> expect = {0, 85, 171, 256, 341, 427};
  CHECK(period_revealing_set(inst) == expect);
}

TEST_CASE("period-revealing set of a reduced r | q instance") {
  const auto inst = synthetic_instance(16, 4, 0);
  const std::vector<u64> expect = {0, 4, 8, 12};
  CHECK(period_revealing_set(inst) == expect);
}

TEST_CASE("every period-revealing c carries at least 4/(pi^2 r) probability") {
  for (const auto& [N, y] : default_table1_pairs()) {
    const auto inst = build_instance(N, y, 0);
    const double bound = 4.0 / (kPi * kPi * static_cast<double>(inst.r));
    for (const u64 c : period_revealing_set(inst)) CHECK(prob_c(inst, c) >= bound);
  }
}

TEST_CASE("miss probability of the survey anchors") {
  CHECK(std::abs(miss_probability(build_instance(21, 2, 0)) - 0.2074) < 5e-5);
  CHECK(std::abs(miss_probability(build_instance(437, 2, 0)) - 0.2263) < 5e-5);
  CHECK(std::abs(miss_probability(build_instance(2021, 4, 0)) - 0.2263) < 5e-5);
}

TEST_CASE("r | q instances never miss") {
  // All mass sits exactly on the multiples of q/r.
  const auto inst = synthetic_instance(256, 4, 0);
  CHECK(miss_probability(inst) == 0.0);
  for (u64 c = 0; c < inst.q; ++c) {
    if (c % 64 == 0)
      CHECK(prob_c(inst, c) == doctest::Approx(0.25).epsilon(1e-14));
    else
      CHECK(prob_c(inst, c) == 0.0);
  }
}

TEST_CASE("build_spectrum aggregates consistently") {
  const auto inst = build_instance(21, 2, 0);
  const auto spec = build_spectrum(inst);
  REQUIRE(spec.probs.size() == inst.q);
  CHECK(spec.revealing == period_revealing_set(inst));
  CHECK(spec.revealing.size() == inst.r);
  CHECK(std::abs(spec.miss - miss_probability(inst)) < 1e-14);
  const double total = std::accumulate(spec.probs.begin(), spec.probs.end(), 0.0);
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("si at anchor points against the power series") {
  CHECK(si(0.0) == 0.0);
  CHECK(std::abs(si(kPi) - si_series(kPi)) < 1e-9);
  CHECK(std::abs(si(1.0) - si_series(1.0)) < 1e-9);
  CHECK(std::abs(si(4.0) - si_series(4.0)) < 1e-9);
  CHECK(std::abs(si(kPi) - 1.851937051982) < 1e-9);
  CHECK_THROWS_AS(si(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(si(1001.0), std::invalid_argument);
  // Si increases on [0, pi].
  double prev = 0.0;
  for (double x = 0.25; x <= 3.0; x += 0.25) {
    const double v = si(x);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("analytic limit of the miss probability") {
  const double P = analytic_miss();
  CHECK(std::abs(P - 0.226305) < 1e-5);
  // Independent route: P = 1 - 2 * integral_0^(1/2) sin^2(pi u) / (pi u)^2 du.
  const auto integrand = [](double u) {
    if (u == 0.0) return 1.0;
    const double s = std::sin(kPi * u) / (kPi * u);
    return s * s;
  };
  const double integral = simpson(integrand, 0.0, 0.5, 1 << 14);
  CHECK(std::abs(P - (1.0 - 2.0 * integral)) < 1e-6);
  // And the N = 2021 instance is already within a part in a thousand.
  CHECK(std::abs(miss_probability(build_instance(2021, 4, 0)) - P) < 1e-3);
}

TEST_CASE("sample_l follows the residue-class weights") {
  Rng rng(99);
  const int draws = 200000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < draws; ++i) ++counts[sample_l(21, 2, rng)];
  // Classes l in {0, 1} hold 86 of the 512 values, the rest hold 85.
  CHECK(std::abs(counts[0] / double(draws) - 86.0 / 512.0) < 0.005);
  CHECK(std::abs(counts[1] / double(draws) - 86.0 / 512.0) < 0.005);
  for (int l = 2; l < 6; ++l)
    CHECK(std::abs(counts[l] / double(draws) - 85.0 / 512.0) < 0.005);
}

TEST_CASE("spectrum sampler hits the period-revealing set at rate 1 - P") {
  const auto inst = build_instance(21, 2, 0);
  const auto S = period_revealing_set(inst);
  const SpectrumSampler sampler(inst);
  Rng rng(7);
  const int draws = 100000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const u64 c = sampler.draw(rng);
    REQUIRE(c < inst.q);
    if (std::find(S.begin(), S.end(), c) != S.end()) ++hits;
  }
  const double expect = 1.0 - miss_probability(inst);
  CHECK(std::abs(hits / double(draws) - expect) < 0.01);
}

TEST_CASE("spectrum sampler on r | q instances emits only multiples of q/r") {
  const auto inst = synthetic_instance(256, 4, 0);
  const SpectrumSampler sampler(inst);
  Rng rng(21);
  for (int i = 0; i < 20000; ++i) CHECK(sampler.draw(rng) % 64 == 0);
}

TEST_CASE("sampler draws are reproducible from the seed") {
  const auto inst = build_instance(21, 2, 0);
  const SpectrumSampler sampler(inst);
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) CHECK(sampler.draw(a) == sampler.draw(b));
}

TEST_CASE("table1 survey rows") {
  const auto rows = table1(default_table1_pairs());
  REQUIRE(rows.size() == 30);
  const auto& first = rows.front();
  CHECK(first.N == 21);
  CHECK(first.L == 9);
  CHECK(first.phi == 12);
  CHECK(first.y == 2);
  CHECK(first.r == 6);
  CHECK(first.A == 85);
  CHECK(std::abs(first.P - 0.2074) < 5e-5);
  for (const auto& row : rows) CHECK(row.ok());
}

TEST_CASE("table1 reports bad pairs as error rows without aborting") {
  const auto rows = table1({{21, 2}, {21, 7}, {17, 3}, {55, 2}});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());  // gcd(7, 21) > 1
  CHECK_FALSE(rows[2].ok());  // 17 is prime
  CHECK(rows[3].ok());
  CHECK(rows[3].r == 20);
}
