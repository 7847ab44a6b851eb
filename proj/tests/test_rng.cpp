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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "scsim/rng.hpp"

using namespace scsim;

TEST_CASE("philox4x32-10 known answers") {
  auto z = Philox4x32::generate(0, 0, 0, 0, 0, 0);
  CHECK(z.v[0] == 0x6627e8d5u);
  CHECK(z.v[1] == 0xe169c58du);
  CHECK(z.v[2] == 0xbc57ac4cu);
  CHECK(z.v[3] == 0x9b00dbd8u);

  const std::uint32_t f = 0xffffffffu;
  auto m = Philox4x32::generate(f, f, f, f, f, f);
  CHECK(m.v[0] == 0x408f276du);
  CHECK(m.v[1] == 0x41c83b0eu);
  CHECK(m.v[2] == 0xa20bc7c6u);
  CHECK(m.v[3] == 0x6d5451fdu);
}

TEST_CASE("substreams are reproducible and distinct") {
  CounterRng a(1234, Stream::kChannelFading, 3, 17, 5);
  CounterRng b(1234, Stream::kChannelFading, 3, 17, 5);
  CounterRng c(1234, Stream::kChannelFading, 4, 17, 5);
  CounterRng d(1234, Stream::kChannelShadow, 3, 17, 5);
  bool any_c = false, any_d = false;
  for (int i = 0; i < 100; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
    any_c = any_c || va != c.next_u64();
    any_d = any_d || va != d.next_u64();
  }
  CHECK(any_c);
  CHECK(any_d);
}

TEST_CASE("uniform ranges") {
  CounterRng rng(99, Stream::kPlacement);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double o = rng.open01();
    CHECK(o > 0.0);
    CHECK(o <= 1.0);
  }
}

TEST_CASE("moment sanity of exponential and normal draws") {
  CounterRng rng(7, Stream::kArrivals);
  const int n = 200000;
  double se = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    se += rng.exponential();
    double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bulk exponential fill matches per-draw transform") {
  CounterRng r1(2024, Stream::kChannelFading, 1, 2, 3);
  CounterRng r2(2024, Stream::kChannelFading, 1, 2, 3);
  const std::size_t n = 257;
  std::vector<std::uint64_t> bits(n);
  std::vector<double> out(n);
  fill_exponential(r1, bits.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    double want = r2.exponential();
    CHECK(out[i] == doctest::Approx(want).epsilon(1e-12));
  }
}
