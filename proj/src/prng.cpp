// SPDX-License-Identifier: Apache-2.0
#include "agentharness/prng.hpp"

namespace ah {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  // Reject the tail that would make some residues more likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ah
