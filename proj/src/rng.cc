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

#include "nba/rng.h"

namespace nba {

Rng::Rng(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.Next();
  // xoshiro must not start from the all-zero state; SplitMix64 output of four
  // consecutive words cannot be all zero, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::DerivedSeed() const {
  const std::uint64_t a = SplitMix64Mix(master_seed ^ 0x6A09E667F3BCC909ULL);
  const std::uint64_t b =
      SplitMix64Mix(stream_index * 0x9E3779B97F4A7C15ULL + 0xBB67AE8584CAA73BULL);
  return SplitMix64Mix(a ^ b);
}

}  // namespace nba
