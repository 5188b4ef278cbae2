// Copyright 2026 The nba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NBA_RNG_H_
#define NBA_RNG_H_

#include <cstdint>
#include <limits>
#include <random>

namespace nba {

// SplitMix64 finalizer, used for seeding and stream derivation.
inline std::uint64_t SplitMix64Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return SplitMix64Mix(state_);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** with helpers for the draws the simulator needs.
//
// Bounded integers use Lemire's multiply-and-reject method on 32-bit halves
// (64-bit words are split and the spare half is buffered), so the result is
// exactly uniform. Doubles carry 53 random bits.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return NextU64(); }

  std::uint64_t NextU64() {
    const std::uint64_t result = Rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = Rotl(s_[3], 45);
    return result;
  }

  std::uint32_t NextU32() {
    if (have_half_) {
      have_half_ = false;
      return half_;
    }
    const std::uint64_t w = NextU64();
    half_ = static_cast<std::uint32_t>(w >> 32);
    have_half_ = true;
    return static_cast<std::uint32_t>(w);
  }

  // Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t UniformIndex(std::uint64_t n) {
    if (n <= 0xFFFFFFFFULL) {
      const std::uint32_t bound = static_cast<std::uint32_t>(n);
      std::uint64_t m = static_cast<std::uint64_t>(NextU32()) * bound;
      std::uint32_t low = static_cast<std::uint32_t>(m);
      if (low < bound) {
        const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
        while (low < threshold) {
          m = static_cast<std::uint64_t>(NextU32()) * bound;
          low = static_cast<std::uint32_t>(m);
        }
      }
      return m >> 32;
    }
    unsigned __int128 m = static_cast<unsigned __int128>(NextU64()) * n;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(NextU64()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi].
  std::uint64_t UniformRange(std::uint64_t lo, std::uint64_t hi) {
    if (hi - lo == std::numeric_limits<std::uint64_t>::max()) return NextU64();
    return lo + UniformIndex(hi - lo + 1);
  }

  // Uniform double in [0, 1).
  double UniformDouble() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Standard normal deviate.
  double Normal() { return normal_(*this); }

 private:
  static std::uint64_t Rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  std::uint32_t half_ = 0;
  bool have_half_ = false;
  std::normal_distribution<double> normal_;
};

// Identifies one reproducible stream: stream i of a master seed.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  // Seed word fed to the engine; also reported in run records.
  std::uint64_t DerivedSeed() const;
  Rng Engine() const { return Rng(DerivedSeed()); }
};

// Engine for stream `index` of `master_seed`.
inline Rng Substream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream{master_seed, index}.Engine();
}

}  // namespace nba

#endif  // NBA_RNG_H_
