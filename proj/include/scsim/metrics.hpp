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

#include <span>
#include <vector>

#include "scsim/engine.hpp"

namespace scsim {

// Trimming rules applied before measuring. Buffer and rebuffering metrics
// ignore everything before global_start_s; quality metrics additionally skip
// the first per_user_skip_s of each user's own session; prebuffering can be
// restricted to users arriving after churn_cutoff_s.
struct TrimPolicy {
  double global_start_s = 0.0;
  double per_user_skip_s = 0.0;
  bool prebuffer_churn_only = false;
  double churn_cutoff_s = 0.0;
};

// Per-experiment policy: experiments 1/1*/2 drop the arrival phase plus the
// following 100 s; experiments 2/3 drop the first 30 s of each user's trace
// for quality metrics; experiment 2 measures prebuffering on churn arrivals
// only.
TrimPolicy trim_for(const RunTrace& run);

struct MetricsReport {
  double max_overshoot_s = 0.0;    // max over rows of buffer - target
  double min_buffer_s = 0.0;
  double mean_buffer_s = 0.0;
  double rebuffer_mean_s = 0.0;    // per-user totals reduced over users
  double rebuffer_max_s = 0.0;
  double prebuffer_mean_s = 0.0;
  double prebuffer_max_s = 0.0;
  int prebuffer_count = 0;
  double mean_media_rate_bps = 0.0;
  double fluctuation_fraction = 0.0;
  double fairness_iqr_bps = 0.0;
  int users_total = 0;
  int users_empty_after_trim = 0;  // reported, never fatal
};

MetricsReport compute_metrics(const RunTrace& run, const TrimPolicy& policy);

// Linear-interpolation quantile (the common "type 7" convention); q in [0,1].
double quantile_linear(std::vector<double> values, double q);

struct Stat {
  double mean = 0.0;
  double max = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
};

Stat reduce(std::span<const double> per_run);

// Cross-run reduction of already per-run-reduced reports.
struct AggregateSummary {
  int runs = 0;
  Stat max_overshoot_s;
  Stat min_buffer_s;
  Stat mean_buffer_s;
  Stat rebuffer_mean_s;
  Stat rebuffer_max_s;
  Stat prebuffer_mean_s;
  Stat prebuffer_max_s;
  Stat mean_media_rate_bps;
  Stat fluctuation_fraction;
  Stat fairness_iqr_bps;
};

AggregateSummary aggregate(std::span<const MetricsReport> reports);

// Start-up delays of every user that completed prebuffering, subject to the
// churn filter; used for delay histograms.
std::vector<double> prebuffer_delays(const RunTrace& run, const TrimPolicy& policy);

}  // namespace scsim
