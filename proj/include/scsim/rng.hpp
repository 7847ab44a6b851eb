// Copyright 2026 The scsim Authors
//
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

#include <cmath>
#include <cstdint>
#include <numbers>

#include "scsim/kernels.hpp"

namespace scsim {

// Philox4x32-10 counter-based generator (Salmon et al.). Streams are pure
// functions of (seed, stream id, entity ids, slot), so any draw can be
// reproduced in isolation and skipping an entity's draws never perturbs
// another entity's sequence.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  struct Block {
    std::uint32_t v[4];
  };

  static Block generate(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                        std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * x0;
      std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * x2;
      std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      x0 = hi1 ^ x1 ^ k0;
      x1 = lo1;
      x2 = hi0 ^ x3 ^ k1;
      x3 = lo0;
      k0 += kW0;
      k1 += kW1;
    }
    return Block{{x0, x1, x2, x3}};
  }
};

// Substream identifiers, kept stable across versions since they define the
// meaning of a seed.
enum class Stream : std::uint32_t {
  kChannelFading = 1,
  kChannelShadow = 2,
  kPlacement = 3,
  kMediaStart = 4,
  kLibrary = 5,
  kArrivals = 6,
  kValidate = 7,
};

// A single substream addressed by (seed, stream, a, b, c); draws advance a
// 32-bit block counter. Each Philox block yields two u64 values.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint32_t a = 0,
             std::uint32_t b = 0, std::uint32_t c = 0)
      : k0_(static_cast<std::uint32_t>(seed)),
        k1_(static_cast<std::uint32_t>(seed >> 32)),
        c1_((static_cast<std::uint32_t>(stream) << 24) | (a & 0x00ffffffu)),
        c2_(b),
        c3_(c) {}

  std::uint64_t next_u64() {
    if (phase_ == 0) {
      blk_ = Philox4x32::generate(ctr_++, c1_, c2_, c3_, k0_, k1_);
      phase_ = 1;
      return make_u64(blk_.v[0], blk_.v[1]);
    }
    phase_ = 0;
    return make_u64(blk_.v[2], blk_.v[3]);
  }

  void fill_u64(std::uint64_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = next_u64();
  }

  // Uniform on (0, 1]: (bits>>11 + 1) * 2^-53.
  double open01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double exponential() { return -std::log(open01()); }

  // Standard normal, Box-Muller. Draws two uniforms per call.
  double normal() {
    double u1 = open01();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t make_u64(std::uint32_t lo, std::uint32_t hi) {
    return static_cast<std::uint64_t>(lo) |
           (static_cast<std::uint64_t>(hi) << 32);
  }

  std::uint32_t k0_, k1_, c1_, c2_, c3_;
  std::uint32_t ctr_ = 0;
  Philox4x32::Block blk_{};
  int phase_ = 0;
};

// Fills out[0..n) with Exp(1) draws using the dispatched transform kernel.
inline void fill_exponential(CounterRng& rng, std::uint64_t* bits_scratch,
                             double* out, std::size_t n) {
  rng.fill_u64(bits_scratch, n);
  kernels::ops().exp_from_bits(bits_scratch, out, n);
}

}  // namespace scsim
