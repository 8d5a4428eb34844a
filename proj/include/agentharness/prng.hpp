// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace ah {

/// SplitMix64 (Steele, Lea & Flood 2014). Chosen for sampling because it is
/// tiny, fully specified and trivially portable: seed 1234567 yields
/// 6457827717110365317, 3203168211198807973, 9817491932198370423, ...
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Double in [0, 1) from the top 53 bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// 64-bit FNV-1a, used to derive per-category sampling streams.
std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace ah
