// Copyright 2026 The lisa-match Authors
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

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace lisa {

// Counter-based generator used for every random draw in the library.
//
// Output k (k = 1, 2, ...) of the stream keyed by `key` is
//   finalize(key + k * 0x9E3779B97F4A7C15)
// where finalize is the SplitMix64 output mixer. With key = seed this is
// exactly SplitMix64 seeded with `seed`. Independent sub-streams of one seed
// use key = finalize(finalize(seed) ^ (stream * 0xD1B54A32D192ED03)).
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
    return finalize(finalize(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
  }

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(stream_key(seed, stream)) {}

  constexpr std::uint64_t next() noexcept { return finalize(key_ + (++counter_) * kGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  constexpr double uniform_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform multiple of 2^-30 in [0, 1).
  constexpr double grid_coordinate() noexcept {
    return static_cast<double>(next() >> 34) * 0x1.0p-30;
  }

  /// Unbiased integer in [0, bound) by rejection; bound > 0.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Sub-stream ids of an instance seed.
inline constexpr std::uint64_t kPointStream = 1;
inline constexpr std::uint64_t kPermutationStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;
inline constexpr std::uint64_t kSpectralStream = 4;

/// hash64(v1, ..., vk): h = 0; for each v, h = finalize(h ^ v) + kGamma.
/// Doubles enter through their IEEE-754 bit pattern.
inline constexpr std::uint64_t hash64(std::initializer_list<std::uint64_t> values) noexcept {
  std::uint64_t h = 0;
  for (std::uint64_t v : values) h = CounterRng::finalize(h ^ v) + CounterRng::kGamma;
  return h;
}

inline std::uint64_t bits_of(double x) noexcept { return std::bit_cast<std::uint64_t>(x); }

}  // namespace lisa
