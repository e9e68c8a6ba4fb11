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

#include "gprop/rng.hpp"

#include "gprop/error.hpp"

namespace gprop {

std::uint64_t uniform_int(const RngKey& key, std::uint64_t n) {
  if (n == 0) fail(ErrorKind::Validation, "uniform_int requires n >= 1");
  if (n == 1) return 0;
  // Largest multiple of n that fits in 2^64 is 2^64 - (2^64 mod n).
  const std::uint64_t reject_from = 0 - ((0 - n) % n);
  std::uint64_t bits = random_bits(key);
  for (std::uint64_t attempt = 1;; ++attempt) {
    if (reject_from == 0 || bits < reject_from) return bits % n;
    bits = detail::mix64(bits + attempt * detail::kGolden);
  }
}

}  // namespace gprop
