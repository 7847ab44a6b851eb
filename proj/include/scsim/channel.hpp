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
#include <span>
#include <vector>

namespace scsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// Indoor small-cell radio parameters. tx_power is the transmit power
// normalized by noise power, so signal terms are dimensionless SNRs.
struct ChannelParams {
  double f0_ghz = 5.0;
  double bandwidth_hz = 20e6;
  double tx_power = 1e9;  // 90 dB transmit-SNR budget
  double c_min_bps = 2e6;     // links below this rate are unusable
  int fading_draws = 32;      // Monte-Carlo draws per link per slot
  double refresh_period_s = 5.0;
  double sigma2_los_db = 9.0;   // shadowing variance, dB^2
  double sigma2_nlos_db = 16.0;
};

// A1-style indoor pathloss in dB at distance d meters, floored at 3 m.
// LOS:  18.7 log10(d) + 46.8 + 20 log10(f0/4)
// NLOS: 36.8 log10(d) + 43.8 + 20 log10(f0/4)
double pathloss_db(double d, bool los, double f0_ghz, double shadow_db);

// LOS probability: 1 for d <= 3, else
// 1 - 0.9 * (1 - (1.24 - 0.6 log10(d))^3)^(1/3), clamped to [0, 1].
double los_probability(double d);

// Slow link state, redrawn once per refresh period. A pure function of
// (seed, user, helper, epoch, distance), so recomputing it is idempotent.
struct SlowLink {
  bool los = false;
  double shadow_db = 0.0;
  double gain_lin = 0.0;  // 10^(-PL/10) including shadowing
};

SlowLink draw_slow_link(std::uint64_t seed, std::uint32_t uid,
                        std::uint32_t helper, std::uint32_t epoch, double d,
                        const ChannelParams& params);

// Shannon-type rate of one link under Rayleigh fading, estimated by
// averaging K = fading_draws Monte-Carlo samples:
//   W/K * sum_k log2(1 + signal*X_k / (1 + sum_j intf_j*Y_jk)),
// all |s|^2 factors i.i.d. Exp(1). Draw order: K signal draws, then K per
// interferer. `rng_stream` identifies the substream (seed, uid, slot, helper
// key parts are the caller's business).
class CounterRng;
double link_rate(double signal, std::span<const double> interferer_gains,
                 const ChannelParams& params, CounterRng& rng);

// Per-slot fading sampler for a whole user: one shared draw matrix per user
// and slot, helper h's own draws acting as interference on every other link
// of that user. Produces K draws per link per slot keyed by
// (seed, uid, slot, helper), so links are reproducible in isolation.
class LinkSampler {
 public:
  explicit LinkSampler(const ChannelParams& params, std::uint64_t seed);

  // sgain[h] = tx_power * gain_lin of helper h towards the user; rates[h]
  // receives the Monte-Carlo rate in bit/s. Links whose best case
  // W*log2(1 + sgain*X_max) cannot reach c_min are skipped and reported as
  // rate 0 (X_max = 53 ln 2 is the exact top of the draw range).
  void sample_rates(std::uint32_t uid, std::uint32_t slot,
                    std::span<const double> sgain, std::span<double> rates);

 private:
  ChannelParams params_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> bits_;
  std::vector<double> draws_;  // row-major [helper][k]
  std::vector<double> total_;
};

std::vector<Vec2> make_helper_grid(int rows, int cols, double area_w,
                                   double area_h);

}  // namespace scsim
