/* Copyright 2026 The gprop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

namespace gprop {

/// Purpose of a draw. Each purpose has its own stream so adding a draw to one
/// kernel never shifts another kernel's randomness.
enum class DrawTag : std::uint16_t {
  Infect = 0,
  Recover = 1,
  Latent = 2,
  EdgeTrial = 3,
  NodePick = 4,
  OpinionInit = 5,
};

/// Address of a single random draw. The generator is a pure function of the
/// key, so results do not depend on thread count, scheduling or partitioning.
struct RngKey {
  std::uint64_t master_seed = 0;
  std::uint32_t sim_index = 0;
  std::uint32_t step = 0;
  std::uint64_t node_id = 0;
  DrawTag tag = DrawTag::Infect;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// 64 random bits for `key`. The key is packed into two 64-bit lanes
/// (sim/step/tag and node id), keyed by the mixed master seed, then put through
/// two finalizer rounds with cross-mixing between the lanes.
constexpr std::uint64_t random_bits(const RngKey& key) noexcept {
  using detail::kGolden;
  using detail::mix64;
  const std::uint64_t seed = mix64(key.master_seed + kGolden);
  std::uint64_t hi = (static_cast<std::uint64_t>(key.sim_index) << 32) | key.step;
  std::uint64_t lo = key.node_id;
  hi = mix64(hi ^ seed ^ (static_cast<std::uint64_t>(key.tag) * 0xd6e8feb86659fd93ull));
  lo = mix64(lo + seed + kGolden);
  hi = mix64(hi ^ (lo + kGolden));
  lo = mix64(lo ^ (hi * 0xff51afd7ed558ccdull));
  return hi ^ lo;
}

/// Uniform in [0, 1) from the top 53 bits.
constexpr double uniform(const RngKey& key) noexcept {
  return static_cast<double>(random_bits(key) >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, n) by rejection; the i-th candidate is a further
/// mix of the key's bits. Throws ErrorKind::Validation when n == 0.
std::uint64_t uniform_int(const RngKey& key, std::uint64_t n);

}  // namespace gprop
