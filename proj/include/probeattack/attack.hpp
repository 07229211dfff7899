#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "probeattack/common.hpp"
#include "probeattack/rng.hpp"
#include "probeattack/shor_spectrum.hpp"

namespace probeattack::attack {

/// Record of one period-finding run, honest or probed. On a probed run the
/// user's register reads a uniform c while the attacker's register holds d
/// with (c + d) mod q following the honest law; the attacker can only use
/// that sum once the user's garbage c leaks.
struct ShorAttackTranscript {
  shor::ShorInstance instance;
  u64 user_c = 0;
  std::optional<u64> attacker_d;    // present on probed runs
  bool leaked = false;
  std::optional<u64> attacker_sum;  // (user_c + attacker_d) mod q, present on leak
  std::optional<u64> user_period;
  std::optional<std::pair<u64, u64>> user_factors;
  std::optional<u64> attacker_period;
  std::optional<std::pair<u64, u64>> attacker_factors;
};

/// Repeated-trial driver for one (N, y). Caches the per-residue instances
/// and the spectrum samplers; A takes at most two values as l varies, so at
/// most two cumulative tables are ever built.
///
/// Draw order is fixed and shared by both run kinds: first l, then the
/// spectrum draw, then (probed runs only) the user's uniform c. Honest and
/// probed runs from equal seeds therefore land on the same honest outcome.
class ShorTrialContext {
 public:
  ShorTrialContext(u64 N, u64 y);

  ShorAttackTranscript run_honest(Rng& rng);
  ShorAttackTranscript run_attacked(Rng& rng, bool leak);

  const shor::ShorInstance& base_instance() const { return base_; }

 private:
  const shor::ShorInstance& instance_for(u64 l);
  const shor::SpectrumSampler& sampler_for(const shor::ShorInstance& inst);
  void recover(u64 c, std::optional<u64>& period,
               std::optional<std::pair<u64, u64>>& factors) const;

  shor::ShorInstance base_;
  std::map<u64, shor::ShorInstance> instances_;       // keyed by l
  std::map<u64, shor::SpectrumSampler> samplers_;     // keyed by A
};

/// Single honest run: collapse l, draw c from the spectrum, attempt period
/// recovery and factoring. Attacker fields stay empty.
ShorAttackTranscript run_honest_shor(u64 N, u64 y, Rng& rng);

/// Single probed run. The honest outcome is split as c uniform, d = m - c;
/// with leak the attacker reconstructs m = (c + d) mod q and runs the same
/// recovery the user would.
ShorAttackTranscript run_attacked_shor(u64 N, u64 y, Rng& rng, bool leak);

/// Exact success data for one instance: the probability mass of runs whose c
/// recovers the period, and how many of the q outcomes do so (recovery
/// succeeds only on period-revealing c whose reduced numerator is coprime
/// to r, so only |S| candidates need checking).
struct SuccessProfile {
  double honest_mass = 0.0;  // success probability of an honest run
  u64 recoverable = 0;       // |{c : recover_period succeeds}|
};
SuccessProfile success_profile(const shor::ShorInstance& inst);

struct ShorDetection {
  bool attack_detected = false;
  std::vector<u64> outcomes;  // every drawn c, in order
  u64 violations = 0;         // outcomes off the comb of multiples of q/r_known
};

using ShorDetectSampler = std::function<u64(const shor::ShorInstance&, Rng&)>;

/// Detection protocol: period-find a planted function a -> a mod r_known with
/// r_known a power of two dividing q = 2^L. Honest physics lands only on
/// multiples of q/r_known; any other outcome flags the attack. trials == 0
/// yields no evidence and reads clean.
ShorDetection detect_attack_shor(u64 r_known, int L, const ShorDetectSampler& sampler,
                                 int trials, Rng& rng);

/// Sampler drawing from the true spectrum of the planted function
/// (the cumulative table is built on first use and reused).
ShorDetectSampler honest_detection_sampler();

/// Sampler for the probed register: uniform over [0, q).
ShorDetectSampler attacked_detection_sampler();

/// What a miss probability P costs the attacker: expected runs per factored
/// key n = 1/(1-P), fluctuation sd = sqrt(n), detectable excess after
/// (n + sd)/sd keys, i.e. one illegal access per key with probability
/// sd/(n + sd).
struct AttackerStats {
  double miss = 0.0;
  double n_bar = 0.0;
  double sd = 0.0;
  double trials_per_illegal = 0.0;
  double illegal_prob = 0.0;
};
AttackerStats attacker_stats(double miss);

/// Literal two-register joint law of the probed run at toy scale: the q*q
/// matrix Prob(c, d) = |q^-1 * sum_a f(a) exp(2*pi*i*a*(c+d)/q)|^2 evaluated
/// term by term (row-major, index c*q + d). Cross-checks the factorized
/// sampling used at full scale. q <= 32.
std::vector<double> toy_state_oracle(u64 q, u64 r, u64 l);

}  // namespace probeattack::attack
