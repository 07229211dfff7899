#pragma once

#include <cmath>
#include <vector>

#include "probeattack/common.hpp"

namespace probeattack::stats {

/// Pearson chi-square statistic of observed counts against the uniform
/// expectation over the bins.
inline double chi_square_uniform(const std::vector<u64>& counts) {
  u64 total = 0;
  for (const u64 c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (const u64 c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

/// Upper 1% critical value of chi-square with df degrees of freedom
/// (Wilson-Hilferty cube approximation; within ~0.1 for df >= 10).
inline double chi_square_critical_99(int df) {
  const double z = 2.3263478740408408;  // 0.99 quantile of the standard normal
  const double t = 2.0 / (9.0 * static_cast<double>(df));
  const double w = 1.0 - t + z * std::sqrt(t);
  return static_cast<double>(df) * w * w * w;
}

}  // namespace probeattack::stats
