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

#include "scsim/media.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "scsim/rng.hpp"

namespace scsim {

VideoLibrary build_library(int n_videos, double duration_s, double segment_duration_s,
                           const std::vector<double>& ladder_bps, double vbr_sigma,
                           std::uint64_t seed) {
  if (n_videos < 0 || duration_s <= 0.0 || segment_duration_s <= 0.0)
    throw std::invalid_argument("build_library: bad dimensions");
  if (ladder_bps.empty()) throw std::invalid_argument("build_library: empty ladder");
  for (std::size_t i = 1; i < ladder_bps.size(); ++i)
    if (ladder_bps[i] <= ladder_bps[i - 1])
      throw std::invalid_argument("build_library: ladder not ascending");
  if (vbr_sigma < 0.0) throw std::invalid_argument("build_library: negative sigma");

  int n_segments = static_cast<int>(std::ceil(duration_s / segment_duration_s));
  double mu = -0.5 * vbr_sigma * vbr_sigma;

  VideoLibrary lib;
  lib.segment_duration_s = segment_duration_s;
  lib.videos.resize(static_cast<std::size_t>(n_videos));
  for (int v = 0; v < n_videos; ++v) {
    Video& vid = lib.videos[static_cast<std::size_t>(v)];
    vid.id = v;
    vid.duration_s = duration_s;
    vid.ladder_bps = ladder_bps;
    vid.sizes_bits.resize(static_cast<std::size_t>(n_segments));
    for (int s = 0; s < n_segments; ++s) {
      double m = 1.0;
      if (vbr_sigma > 0.0) {
        CounterRng rng(seed, Stream::kLibrary, static_cast<std::uint32_t>(v),
                       static_cast<std::uint32_t>(s), 0);
        m = std::exp(mu + vbr_sigma * rng.normal());
      }
      auto& row = vid.sizes_bits[static_cast<std::size_t>(s)];
      row.reserve(ladder_bps.size());
      for (double rate : ladder_bps) row.push_back(rate * segment_duration_s * m);
    }
  }
  return lib;
}

double segment_size(const VideoLibrary& lib, const SegmentRef& ref, bool wrap) {
  if (ref.video < 0 || ref.video >= static_cast<int>(lib.videos.size()))
    throw std::out_of_range("segment_size: video id");
  const Video& vid = lib.videos[static_cast<std::size_t>(ref.video)];
  if (ref.representation < 0 || ref.representation >= vid.num_representations())
    throw std::out_of_range("segment_size: representation index");
  int s = ref.segment;
  if (wrap && vid.num_segments() > 0) s %= vid.num_segments();
  if (s < 0 || s >= vid.num_segments()) throw std::out_of_range("segment_size: segment index");
  return vid.sizes_bits[static_cast<std::size_t>(s)][static_cast<std::size_t>(ref.representation)];
}

std::string library_to_json(const VideoLibrary& lib) {
  nlohmann::json j;
  j["segment_duration_s"] = lib.segment_duration_s;
  j["videos"] = nlohmann::json::array();
  for (const Video& v : lib.videos) {
    nlohmann::json jv;
    jv["id"] = v.id;
    jv["duration_s"] = v.duration_s;
    jv["ladder_bps"] = v.ladder_bps;
    jv["sizes_bits"] = v.sizes_bits;
    j["videos"].push_back(std::move(jv));
  }
  return j.dump(2);
}

VideoLibrary library_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  VideoLibrary lib;
  lib.segment_duration_s = j.at("segment_duration_s").get<double>();
  for (const auto& jv : j.at("videos")) {
    Video v;
    v.id = jv.at("id").get<int>();
    v.duration_s = jv.at("duration_s").get<double>();
    v.ladder_bps = jv.at("ladder_bps").get<std::vector<double>>();
    v.sizes_bits = jv.at("sizes_bits").get<std::vector<std::vector<double>>>();
    lib.videos.push_back(std::move(v));
  }
  return lib;
}

}  // namespace scsim
