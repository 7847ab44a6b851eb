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

#include "scsim/channel.hpp"

#include <algorithm>
#include <cmath>

#include "scsim/kernels.hpp"
#include "scsim/rng.hpp"

namespace scsim {
namespace {

// exp_from_bits maps bits to (0,1], so draws top out at -ln(2^-53).
constexpr double kDrawMax = 36.7368005696771013991;

}  // namespace

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double pathloss_db(double d, bool los, double f0_ghz, double shadow_db) {
  double deff = std::max(d, 3.0);
  double freq_term = 20.0 * std::log10(0.25 * f0_ghz);
  if (los) return 18.7 * std::log10(deff) + 46.8 + freq_term + shadow_db;
  return 36.8 * std::log10(deff) + 43.8 + freq_term + shadow_db;
}

double los_probability(double d) {
  if (d <= 3.0) return 1.0;
  double t = 1.24 - 0.6 * std::log10(d);
  double p = 1.0 - 0.9 * std::cbrt(1.0 - t * t * t);
  return std::clamp(p, 0.0, 1.0);
}

SlowLink draw_slow_link(std::uint64_t seed, std::uint32_t uid,
                        std::uint32_t helper, std::uint32_t epoch, double d,
                        const ChannelParams& params) {
  CounterRng rng(seed, Stream::kChannelShadow, helper, epoch, uid);
  double u = rng.uniform();
  double n = rng.normal();
  SlowLink link;
  link.los = d < 3.0 || u < los_probability(d);
  double sigma =
      std::sqrt(link.los ? params.sigma2_los_db : params.sigma2_nlos_db);
  link.shadow_db = sigma * n;
  double pl = pathloss_db(d, link.los, params.f0_ghz, link.shadow_db);
  link.gain_lin = std::pow(10.0, -0.1 * pl);
  return link;
}

double link_rate(double signal, std::span<const double> interferer_gains,
                 const ChannelParams& params, CounterRng& rng) {
  std::size_t k = static_cast<std::size_t>(params.fading_draws);
  std::size_t j = interferer_gains.size();
  std::vector<std::uint64_t> bits(k);
  std::vector<double> sig(k), intf(k), isum(k, 0.0);
  fill_exponential(rng, bits.data(), sig.data(), k);
  for (std::size_t i = 0; i < j; ++i) {
    fill_exponential(rng, bits.data(), intf.data(), k);
    kernels::ops().axpy(isum.data(), intf.data(), interferer_gains[i], k);
  }
  double s = kernels::ops().rate_sum_direct(sig.data(), isum.data(), signal, k);
  return params.bandwidth_hz * s / static_cast<double>(k);
}

LinkSampler::LinkSampler(const ChannelParams& params, std::uint64_t seed)
    : params_(params), seed_(seed) {
  std::size_t k = static_cast<std::size_t>(params_.fading_draws);
  bits_.resize(k);
  total_.resize(k);
}

void LinkSampler::sample_rates(std::uint32_t uid, std::uint32_t slot,
                               std::span<const double> sgain,
                               std::span<double> rates) {
  std::size_t h = sgain.size();
  std::size_t k = static_cast<std::size_t>(params_.fading_draws);
  draws_.resize(h * k);
  std::fill(total_.begin(), total_.end(), 0.0);
  for (std::size_t i = 0; i < h; ++i) {
    CounterRng rng(seed_, Stream::kChannelFading, static_cast<std::uint32_t>(i),
                   slot, uid);
    double* row = draws_.data() + i * k;
    fill_exponential(rng, bits_.data(), row, k);
    kernels::ops().axpy(total_.data(), row, sgain[i], k);
  }
  double w_over_k = params_.bandwidth_hz / static_cast<double>(k);
  for (std::size_t i = 0; i < h; ++i) {
    double best = params_.bandwidth_hz * std::log2(1.0 + sgain[i] * kDrawMax);
    if (best < params_.c_min_bps) {
      rates[i] = 0.0;
      continue;
    }
    double r = w_over_k * kernels::ops().rate_sum_shared(
                              draws_.data() + i * k, total_.data(), sgain[i],
                              k);
    rates[i] = r < params_.c_min_bps ? 0.0 : r;
  }
}

std::vector<Vec2> make_helper_grid(int rows, int cols, double area_w,
                                   double area_h) {
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  double cw = area_w / cols;
  double ch = area_h / rows;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out.push_back({(c + 0.5) * cw, (r + 0.5) * ch});
  return out;
}

}  // namespace scsim
