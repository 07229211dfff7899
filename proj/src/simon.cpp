#include "probeattack/simon.hpp"

#include <bit>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace probeattack::simon {

namespace {

int dot(u32 a, u32 b) { return std::popcount(a & b) & 1; }

void check_n(u32 n) {
  if (n < 1 || n > 20) throw std::invalid_argument("simon: n must lie in [1, 20]");
}

// Row-echelon state over GF(2). piv[b] holds the basis row whose leading bit
// is b, or 0 when column b has no pivot yet.
struct Echelon {
  u32 n;
  std::vector<u32> piv;
  u32 rank = 0;

  explicit Echelon(u32 n_) : n(n_), piv(n_, 0) {}

  void add(u32 row) {
    u32 v = row;
    while (v != 0) {
      const int b = std::bit_width(v) - 1;
      if (piv[b] == 0) {
        piv[b] = v;
        ++rank;
        return;
      }
      v ^= piv[b];
    }
  }

  // Clear pivot columns from the other rows (reduced echelon form).
  void reduce() {
    for (u32 b = 0; b < n; ++b) {
      if (piv[b] == 0) continue;
      for (u32 b2 = b + 1; b2 < n; ++b2)
        if (piv[b2] != 0 && (piv[b2] >> b & 1)) piv[b2] ^= piv[b];
    }
  }

  // The unique nonzero null vector, defined only when rank == n - 1.
  std::optional<u32> unique_null_vector() {
    if (rank + 1 != n) return std::nullopt;
    reduce();
    u32 free_col = 0;
    for (u32 b = 0; b < n; ++b)
      if (piv[b] == 0) free_col = b;
    u32 s = u32(1) << free_col;
    for (u32 b = 0; b < n; ++b)
      if (piv[b] != 0 && (piv[b] >> free_col & 1)) s |= u32(1) << b;
    return s;
  }
};

}  // namespace

SimonFunction make_one_to_one(u32 n, u64 seed) {
  check_n(n);
  SimonFunction f;
  f.n = n;
  f.shift = 0;
  const u32 size = u32(1) << n;
  f.table.resize(size);
  for (u32 x = 0; x < size; ++x) f.table[x] = x;
  Rng rng(seed);
  for (u32 i = size - 1; i > 0; --i) {
    const u32 j = static_cast<u32>(rng.uniform(i + 1));
    std::swap(f.table[i], f.table[j]);
  }
  return f;
}

SimonFunction make_two_to_one(u32 n, u32 shift, u64 seed) {
  check_n(n);
  const u32 size = u32(1) << n;
  if (shift == 0 || shift >= size)
    throw std::invalid_argument("make_two_to_one: shift must be a nonzero n-bit value");
  // Shuffle all n-bit values and hand them out as pair labels in order; the
  // first 2^(n-1) values are distinct, so the pair map is injective.
  std::vector<u32> labels(size);
  for (u32 x = 0; x < size; ++x) labels[x] = x;
  Rng rng(seed);
  for (u32 i = size - 1; i > 0; --i) {
    const u32 j = static_cast<u32>(rng.uniform(i + 1));
    std::swap(labels[i], labels[j]);
  }
  SimonFunction f;
  f.n = n;
  f.shift = shift;
  f.table.assign(size, 0);
  u32 next_label = 0;
  for (u32 x = 0; x < size; ++x) {
    if (x < (x ^ shift)) {
      f.table[x] = labels[next_label];
      f.table[x ^ shift] = labels[next_label];
      ++next_label;
    }
  }
  return f;
}

std::vector<double> honest_outcome_distribution(const SimonFunction& f) {
  if (f.n > 12)
    throw resource_error("honest_outcome_distribution: exact enumeration capped at n <= 12");
  const u32 size = u32(1) << f.n;
  std::unordered_map<u32, std::vector<u32>> classes;  // value -> preimages
  for (u32 x = 0; x < size; ++x) classes[f.table[x]].push_back(x);
  std::vector<double> prob(size);
  const double scale = 1.0 / (static_cast<double>(size) * static_cast<double>(size));
  for (u32 k = 0; k < size; ++k) {
    u64 weight = 0;  // sum over values of (sum of signs)^2, exact in integers
    for (const auto& [v, xs] : classes) {
      long long amp = 0;
      for (const u32 x : xs) amp += dot(x, k) ? -1 : 1;
      weight += static_cast<u64>(amp * amp);
    }
    prob[k] = static_cast<double>(weight) * scale;
  }
  return prob;
}

u32 honest_sample(const SimonFunction& f, Rng& rng) {
  u32 k = static_cast<u32>(rng.uniform(u64(1) << f.n));
  if (f.shift != 0 && dot(k, f.shift))
    k ^= f.shift & (~f.shift + 1);  // flip the lowest shift bit onto the hyperplane
  return k;
}

AttackedSample attacked_sample(const SimonFunction& f, Rng& rng) {
  const u32 m = honest_sample(f, rng);
  const u32 k = static_cast<u32>(rng.uniform(u64(1) << f.n));
  return {k, k ^ m};
}

Gf2Solution solve_gf2(const Gf2System& sys) {
  if (sys.n < 1 || sys.n > 32)
    throw std::invalid_argument("solve_gf2: n must lie in [1, 32]");
  Echelon ech(sys.n);
  for (const u32 row : sys.rows) ech.add(row);
  Gf2Solution sol;
  sol.rank = ech.rank;
  sol.nullity = sys.n - ech.rank;
  if (sol.nullity == 1) sol.shift = ech.unique_null_vector();
  return sol;
}

SimonRun run_simon_with(const SimonFunction& f, const SimonSampler& sampler, Rng& rng,
                        int budget) {
  const u32 n = f.n;
  if (budget < 0) budget = 4 * static_cast<int>(n);
  Echelon ech(n);
  SimonRun run;
  std::optional<u32> confirmed;
  for (int i = 0; i < budget; ++i) {
    const u32 k = sampler(f, rng);
    run.samples.push_back(k);
    ech.add(k);
    if (ech.rank + 1 == n) {
      // A single candidate shift remains; two classical queries settle
      // whether it is a genuine collision. Uniform streams pass through
      // rank n-1 with a bogus candidate, so the confirmation is essential.
      const u32 v = *ech.unique_null_vector();
      if (f.table[0] == f.table[v]) {
        confirmed = v;
        break;
      }
    }
  }
  if (confirmed) {
    run.verdict = SimonVerdict::two_to_one;
    run.shift = confirmed;
    return run;
  }
  const u32 nullity = n - ech.rank;
  if (nullity == 0) {
    run.verdict = SimonVerdict::one_to_one;
  } else if (nullity == 1) {
    const u32 v = *ech.unique_null_vector();
    if (f.table[0] == f.table[v]) {
      run.verdict = SimonVerdict::two_to_one;
      run.shift = v;
    } else {
      run.verdict = SimonVerdict::one_to_one;  // candidate refuted by the table
    }
  } else {
    run.verdict = SimonVerdict::indeterminate;
  }
  return run;
}

SimonRun run_simon(const SimonFunction& f, Rng& rng, int budget) {
  return run_simon_with(
      f, [](const SimonFunction& g, Rng& r) { return honest_sample(g, r); }, rng, budget);
}

SimonDetection detect_attack_simon(u32 n, u32 s_known, const SimonSampler& sampler,
                                   int budget, Rng& rng) {
  check_n(n);
  if (s_known == 0 || s_known >= (u32(1) << n))
    throw std::invalid_argument("detect_attack_simon: s_known must be a nonzero n-bit value");
  SimonDetection det;
  if (budget <= 0) return det;  // no rounds, no evidence
  const SimonFunction f = make_two_to_one(n, s_known, rng.next());
  det.run = run_simon_with(f, sampler, rng, budget);
  for (const u32 k : det.run.samples)
    if (dot(k, s_known)) ++det.violations;
  det.attack_detected = det.violations != 0 ||
                        det.run.verdict != SimonVerdict::two_to_one ||
                        det.run.shift != s_known;
  return det;
}

}  // namespace probeattack::simon
