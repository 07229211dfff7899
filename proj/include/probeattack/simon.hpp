#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "probeattack/common.hpp"
#include "probeattack/rng.hpp"

namespace probeattack::simon {

/// Black-box function on n-bit strings, stored as a truth table (n <= 20).
/// shift == 0 means one-to-one; otherwise f(x) = f(x ^ shift) and the
/// restriction to pair representatives is injective.
struct SimonFunction {
  u32 n = 0;
  u32 shift = 0;
  std::vector<u32> table;

  u32 operator()(u32 x) const { return table[x]; }
  bool two_to_one() const { return shift != 0; }
};

/// Random bijection on n bits (Fisher-Yates over the identity table).
SimonFunction make_one_to_one(u32 n, u64 seed);

/// Random two-to-one function hiding the given shift != 0: the pairs
/// {x, x ^ shift} receive distinct random n-bit labels.
SimonFunction make_two_to_one(u32 n, u32 shift, u64 seed);

/// Exact outcome law of one query round, by state-vector enumeration:
/// Prob(k) = sum over image values v of |2^-n * sum_{f(x)=v} (-1)^(x.k)|^2.
/// For a valid instance this is uniform (shift == 0) or uniform on the
/// hyperplane k.shift = 0. Capped at n <= 12.
std::vector<double> honest_outcome_distribution(const SimonFunction& f);

/// One draw from the honest outcome law. Uses the structural form of the
/// distribution (uniform k, forced onto the hyperplane when shift != 0),
/// which coincides with honest_outcome_distribution for every valid
/// instance; tests pin the two together.
u32 honest_sample(const SimonFunction& f, Rng& rng);

/// Outcome pair of one probed round: the user sees k, the attacker keeps j.
/// k is uniform on all n-bit strings and k ^ j follows the honest law, so
/// the user's marginal carries no trace of the shift.
struct AttackedSample {
  u32 k = 0;
  u32 j = 0;
};
AttackedSample attacked_sample(const SimonFunction& f, Rng& rng);

/// Linear system over GF(2): each row is one observed k, interpreted as the
/// constraint k . s = 0.
struct Gf2System {
  u32 n = 0;
  std::vector<u32> rows;
};

enum class SimonVerdict { one_to_one, two_to_one, indeterminate };

struct Gf2Solution {
  u32 rank = 0;
  u32 nullity = 0;          // dimension of the null space
  std::optional<u32> shift; // the unique nonzero null vector when nullity == 1
};

/// Gaussian elimination. nullity == 0 forces s = 0 (one-to-one); nullity == 1
/// pins the unique nonzero candidate; anything larger leaves s undetermined.
Gf2Solution solve_gf2(const Gf2System& sys);

struct SimonRun {
  SimonVerdict verdict = SimonVerdict::indeterminate;
  std::optional<u32> shift;  // present exactly when verdict == two_to_one
  std::vector<u32> samples;  // every register outcome observed, in order
};

using SimonSampler = std::function<u32(const SimonFunction&, Rng&)>;

/// Full protocol run with the given per-round sampler and sample budget
/// (negative budget selects the default 4 n). Stops early once rank n-1 pins
/// a candidate shift that the function table confirms as a genuine collision
/// (the standard two classical queries); otherwise all budget rounds are
/// spent. The final verdict comes from the collected system: full rank means
/// one-to-one; a single confirmed null vector means two-to-one; an
/// unconfirmed one also reads as one-to-one, since the collision test
/// refuted it.
SimonRun run_simon_with(const SimonFunction& f, const SimonSampler& sampler, Rng& rng,
                        int budget = -1);

/// run_simon_with using the honest sampler.
SimonRun run_simon(const SimonFunction& f, Rng& rng, int budget = -1);

struct SimonDetection {
  bool attack_detected = false;
  u32 violations = 0;  // observed k with k . s_known = 1
  SimonRun run;
};

/// Detection protocol: run the algorithm on a fresh instance whose shift
/// s_known != 0 the verifier already knows. Honest physics can only emit
/// k orthogonal to s_known and must return that shift; any parity violation
/// or wrong verdict flags an attack. budget == 0 yields no evidence and
/// reads clean.
SimonDetection detect_attack_simon(u32 n, u32 s_known, const SimonSampler& sampler,
                                   int budget, Rng& rng);

}  // namespace probeattack::simon
