#include "probeattack/attack.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "probeattack/numtheory.hpp"

namespace probeattack::attack {

ShorTrialContext::ShorTrialContext(u64 N, u64 y) : base_(shor::build_instance(N, y, 0)) {}

const shor::ShorInstance& ShorTrialContext::instance_for(u64 l) {
  auto it = instances_.find(l);
  if (it == instances_.end()) {
    shor::ShorInstance inst = base_;
    inst.l = l;
    inst.A = (inst.q - 1 - l) / inst.r;
    it = instances_.emplace(l, inst).first;
  }
  return it->second;
}

const shor::SpectrumSampler& ShorTrialContext::sampler_for(const shor::ShorInstance& inst) {
  auto it = samplers_.find(inst.A);
  if (it == samplers_.end()) it = samplers_.emplace(inst.A, shor::SpectrumSampler(inst)).first;
  return it->second;
}

void ShorTrialContext::recover(u64 c, std::optional<u64>& period,
                               std::optional<std::pair<u64, u64>>& factors) const {
  period = numtheory::recover_period(c, base_.q, base_.N, base_.y);
  if (!period) return;
  const numtheory::FactorResult fr = numtheory::factor_from_period(base_.N, base_.y, *period);
  if (fr.ok()) factors = fr.factors;
}

ShorAttackTranscript ShorTrialContext::run_honest(Rng& rng) {
  const u64 l = rng.uniform(base_.q) % base_.r;
  const shor::ShorInstance& inst = instance_for(l);
  ShorAttackTranscript t;
  t.instance = inst;
  t.user_c = sampler_for(inst).draw(rng);
  recover(t.user_c, t.user_period, t.user_factors);
  return t;
}

ShorAttackTranscript ShorTrialContext::run_attacked(Rng& rng, bool leak) {
  const u64 l = rng.uniform(base_.q) % base_.r;
  const shor::ShorInstance& inst = instance_for(l);
  const u64 m = sampler_for(inst).draw(rng);  // the honest outcome, now split in two
  ShorAttackTranscript t;
  t.instance = inst;
  t.user_c = rng.uniform(inst.q);
  t.attacker_d = (m + inst.q - t.user_c) % inst.q;
  t.leaked = leak;
  recover(t.user_c, t.user_period, t.user_factors);
  if (leak) {
    t.attacker_sum = m;
    recover(m, t.attacker_period, t.attacker_factors);
  }
  return t;
}

ShorAttackTranscript run_honest_shor(u64 N, u64 y, Rng& rng) {
  ShorTrialContext ctx(N, y);
  return ctx.run_honest(rng);
}

ShorAttackTranscript run_attacked_shor(u64 N, u64 y, Rng& rng, bool leak) {
  ShorTrialContext ctx(N, y);
  return ctx.run_attacked(rng, leak);
}

SuccessProfile success_profile(const shor::ShorInstance& inst) {
  SuccessProfile prof;
  for (const u64 c : shor::period_revealing_set(inst)) {
    if (numtheory::recover_period(c, inst.q, inst.N, inst.y) == inst.r) {
      prof.honest_mass += shor::prob_c(inst, c);
      ++prof.recoverable;
    }
  }
  return prof;
}

ShorDetection detect_attack_shor(u64 r_known, int L, const ShorDetectSampler& sampler,
                                 int trials, Rng& rng) {
  if (L < 1 || L > 62) throw std::invalid_argument("detect_attack_shor: L must lie in [1, 62]");
  const u64 q = u64(1) << L;
  if (r_known < 2 || r_known >= q || !std::has_single_bit(r_known))
    throw std::invalid_argument(
        "detect_attack_shor: r_known must be a power of two dividing q, 2 <= r_known < q");
  ShorDetection det;
  if (trials <= 0) return det;
  const shor::ShorInstance inst = shor::synthetic_instance(q, r_known, 0);
  const u64 step = q / r_known;
  for (int i = 0; i < trials; ++i) {
    const u64 c = sampler(inst, rng);
    det.outcomes.push_back(c);
    if (c % step != 0) ++det.violations;
  }
  det.attack_detected = det.violations != 0;
  return det;
}

ShorDetectSampler honest_detection_sampler() {
  // One cumulative table per instance shape, built lazily and reused.
  struct Cache {
    u64 q = 0, r = 0, l = 0;
    std::unique_ptr<shor::SpectrumSampler> sampler;
  };
  auto cache = std::make_shared<Cache>();
  return [cache](const shor::ShorInstance& inst, Rng& rng) {
    if (!cache->sampler || cache->q != inst.q || cache->r != inst.r || cache->l != inst.l) {
      cache->sampler = std::make_unique<shor::SpectrumSampler>(inst);
      cache->q = inst.q;
      cache->r = inst.r;
      cache->l = inst.l;
    }
    return cache->sampler->draw(rng);
  };
}

ShorDetectSampler attacked_detection_sampler() {
  return [](const shor::ShorInstance& inst, Rng& rng) { return rng.uniform(inst.q); };
}

AttackerStats attacker_stats(double miss) {
  if (!(miss >= 0.0) || miss >= 1.0)
    throw std::invalid_argument("attacker_stats: P must lie in [0, 1)");
  AttackerStats s;
  s.miss = miss;
  s.n_bar = 1.0 / (1.0 - miss);
  s.sd = std::sqrt(s.n_bar);
  s.trials_per_illegal = (s.n_bar + s.sd) / s.sd;
  s.illegal_prob = s.sd / (s.n_bar + s.sd);
  return s;
}

std::vector<double> toy_state_oracle(u64 q, u64 r, u64 l) {
  if (q > 32) throw resource_error("toy_state_oracle: capped at q <= 32");
  if (!std::has_single_bit(q) || r == 0 || r >= q || l >= r)
    throw std::invalid_argument("toy_state_oracle: need q a power of two, 1 <= r < q, l < r");
  const u64 A = (q - 1 - l) / r;
  std::vector<double> joint(q * q);
  const double norm =
      1.0 / (static_cast<double>(q) * static_cast<double>(q) * static_cast<double>(A + 1));
  for (u64 c = 0; c < q; ++c) {
    for (u64 d = 0; d < q; ++d) {
      std::complex<double> amp{0.0, 0.0};
      for (u64 j = 0; j <= A; ++j) {
        const u64 a = j * r + l;
        const u64 phase = a * (c + d) % q;
        amp += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) /
                                   static_cast<double>(q));
      }
      joint[c * q + d] = std::norm(amp) * norm;
    }
  }
  return joint;
}

}  // namespace probeattack::attack
