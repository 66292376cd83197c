// Copyright 2026 The otsg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTSG_RNG_HPP
#define OTSG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace otsg {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream key from (seed, index). Used for
/// per-trial and per-draw streams so that Monte Carlo work is
/// order-independent and safe to parallelize.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

/// Counter-based generator: the k-th output is a pure function of
/// (key, k), so identical seeds give identical streams on any platform
/// and under any thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(substream_key(seed, stream)) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [a, b).
  double next_uniform(double a, double b) { return a + (b - a) * next_unit(); }

  /// Standard normal via Box-Muller (consumes two uniforms).
  double next_normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    // Guard against log(0).
    while (u1 == 0.0) u1 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace otsg

#endif  // OTSG_RNG_HPP
