#pragma once

#include <cstdint>
#include <stdexcept>

namespace probeattack {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Thrown when an operation would exceed its supported problem size.
/// Exact enumerations and brute-force cross-checks are capped at desk scale
/// on purpose; the closed-form paths have no such caps.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace probeattack
