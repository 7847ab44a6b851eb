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

#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "scsim/media.hpp"

using namespace scsim;

TEST_CASE("cbr library has exact sizes") {
  auto lib = build_library(2, 10.0, 2.0, {0.5e6, 4.5e6}, 0.0, 7);
  REQUIRE(lib.videos.size() == 2);
  CHECK(lib.videos[0].num_segments() == 5);
  CHECK(lib.videos[0].num_representations() == 2);
  for (const auto& v : lib.videos)
    for (const auto& row : v.sizes_bits) {
      CHECK(row[0] == 1.0e6);
      CHECK(row[1] == 9.0e6);
    }
}

TEST_CASE("library is deterministic in seed") {
  auto a = build_library(3, 60.0, 2.0, default_ladder_bps(), 0.25, 42);
  auto b = build_library(3, 60.0, 2.0, default_ladder_bps(), 0.25, 42);
  auto c = build_library(3, 60.0, 2.0, default_ladder_bps(), 0.25, 43);
  CHECK(a.videos[1].sizes_bits == b.videos[1].sizes_bits);
  CHECK(a.videos[0].sizes_bits != c.videos[0].sizes_bits);
}

TEST_CASE("vbr multiplier has unit mean") {
  double tau = 2.0, rate = 1.0e6;
  auto lib = build_library(1, 2.0e4, tau, {rate}, 0.3, 11);
  const auto& v = lib.videos[0];
  REQUIRE(v.num_segments() == 10000);
  double sum = 0.0;
  for (const auto& row : v.sizes_bits) sum += row[0] / (rate * tau);
  double mean = sum / v.num_segments();
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("multiplier is shared across representations") {
  auto lib = build_library(1, 40.0, 2.0, default_ladder_bps(), 0.4, 3);
  const auto& v = lib.videos[0];
  for (const auto& row : v.sizes_bits) {
    double m0 = row[0] / (v.ladder_bps[0] * 2.0);
    for (int r = 1; r < v.num_representations(); ++r) {
      CHECK(row[r] / (v.ladder_bps[r] * 2.0) == doctest::Approx(m0).epsilon(1e-12));
      CHECK(row[r] > row[r - 1]);
    }
  }
}

TEST_CASE("per-representation mean size converges to rate*tau") {
  double tau = 2.0;
  auto lib = build_library(1, 2.0e4, tau, {0.5e6, 4.5e6}, 0.25, 99);
  const auto& v = lib.videos[0];
  for (int r = 0; r < v.num_representations(); ++r) {
    double sum = 0.0;
    for (const auto& row : v.sizes_bits) sum += row[r];
    double mean = sum / v.num_segments();
    CHECK(mean == doctest::Approx(v.ladder_bps[r] * tau).epsilon(0.01));
  }
}

TEST_CASE("segment lookup and wraparound") {
  auto lib = build_library(2, 10.0, 2.0, {1.0e6}, 0.25, 5);
  SegmentRef ref{1, 2, 0};
  CHECK(segment_size(lib, ref) == lib.videos[1].sizes_bits[2][0]);

  SegmentRef past{1, 7, 0};
  CHECK_THROWS_AS(segment_size(lib, past), std::out_of_range);
  CHECK(segment_size(lib, past, true) == lib.videos[1].sizes_bits[2][0]);

  CHECK_THROWS_AS(segment_size(lib, SegmentRef{5, 0, 0}), std::out_of_range);
  CHECK_THROWS_AS(segment_size(lib, SegmentRef{0, 0, 3}), std::out_of_range);
}

TEST_CASE("rejects malformed inputs") {
  CHECK_THROWS_AS(build_library(1, 10.0, 2.0, {}, 0.25, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_library(1, 10.0, 2.0, {2e6, 1e6}, 0.25, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_library(1, 10.0, 2.0, {1e6}, -0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_library(1, 0.0, 2.0, {1e6}, 0.1, 1), std::invalid_argument);
}

TEST_CASE("json round trip preserves the library") {
  auto lib = build_library(2, 20.0, 2.0, default_ladder_bps(), 0.25, 17);
  auto text = library_to_json(lib);
  auto back = library_from_json(text);
  REQUIRE(back.videos.size() == lib.videos.size());
  CHECK(back.segment_duration_s == lib.segment_duration_s);
  for (std::size_t i = 0; i < lib.videos.size(); ++i) {
    CHECK(back.videos[i].id == lib.videos[i].id);
    CHECK(back.videos[i].duration_s == lib.videos[i].duration_s);
    CHECK(back.videos[i].ladder_bps == lib.videos[i].ladder_bps);
    CHECK(back.videos[i].sizes_bits == lib.videos[i].sizes_bits);
  }
}
