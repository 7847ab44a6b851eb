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

#include <cstdint>
#include <string>
#include <vector>

namespace scsim {

// One encoded video: a ladder of average bit rates and the actual
// per-segment sizes in bits. sizes[s][r] is segment s at ladder rung r.
struct Video {
  int id = 0;
  double duration_s = 0.0;
  std::vector<double> ladder_bps;
  std::vector<std::vector<double>> sizes_bits;

  int num_segments() const { return static_cast<int>(sizes_bits.size()); }
  int num_representations() const { return static_cast<int>(ladder_bps.size()); }
};

struct VideoLibrary {
  double segment_duration_s = 0.0;
  std::vector<Video> videos;
};

struct SegmentRef {
  int video = 0;
  int segment = 0;
  int representation = 0;
};

inline std::vector<double> default_ladder_bps() {
  return {0.5e6, 1.0e6, 1.5e6, 2.25e6, 3.25e6, 4.5e6};
}

// Builds a synthetic library. Segment sizes are rate * tau scaled by a
// unit-mean lognormal multiplier (mu = -sigma^2 / 2) drawn once per
// (video, segment) and shared across representations, so a complex scene
// is large at every quality level. Deterministic in seed.
VideoLibrary build_library(int n_videos, double duration_s, double segment_duration_s,
                           const std::vector<double>& ladder_bps, double vbr_sigma,
                           std::uint64_t seed);

// Size in bits of the referenced segment. With wrap=true the segment index
// is taken modulo the video length, so playback loops back to the start.
// Throws std::out_of_range for an invalid reference.
double segment_size(const VideoLibrary& lib, const SegmentRef& ref, bool wrap = false);

std::string library_to_json(const VideoLibrary& lib);
VideoLibrary library_from_json(const std::string& text);

}  // namespace scsim
