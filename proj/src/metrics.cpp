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

#include "scsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scsim {

namespace {

double user_end(const RunTrace& run, const UserTrace& u) {
  return u.depart_s >= 0.0 ? u.depart_s : run.duration_s;
}

// Total halted-playback time inside [from, end]. Underruns pair with the
// next resume; an unresolved underrun counts until the session ends.
double rebuffer_total(const UserTrace& u, double from, double end) {
  double total = 0.0;
  double open = -1.0;
  for (const ClientEvent& e : u.events) {
    if (e.type == ClientEventType::kUnderrun) {
      open = e.t;
    } else if (e.type == ClientEventType::kResume && open >= 0.0) {
      double lo = std::max(open, from);
      double hi = std::min(e.t, end);
      if (hi > lo) total += hi - lo;
      open = -1.0;
    }
  }
  if (open >= 0.0) {
    double lo = std::max(open, from);
    if (end > lo) total += end - lo;
  }
  return total;
}

}  // namespace

TrimPolicy trim_for(const RunTrace& run) {
  TrimPolicy p;
  switch (run.kind) {
    case ExperimentKind::kExp1:
    case ExperimentKind::kExp1Star:
      p.global_start_s = run.arrival_phase_end_s + 100.0;
      break;
    case ExperimentKind::kExp2:
      p.global_start_s = run.arrival_phase_end_s + 100.0;
      p.per_user_skip_s = 30.0;
      p.prebuffer_churn_only = true;
      p.churn_cutoff_s = run.arrival_phase_end_s;
      break;
    case ExperimentKind::kExp3:
      p.per_user_skip_s = 30.0;
      break;
  }
  return p;
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty set");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile q outside [0,1]");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

MetricsReport compute_metrics(const RunTrace& run, const TrimPolicy& policy) {
  MetricsReport rep;
  rep.users_total = static_cast<int>(run.users.size());

  double overshoot = -std::numeric_limits<double>::infinity();
  double min_buf = std::numeric_limits<double>::infinity();
  double buf_sum = 0.0;
  long buf_n = 0;

  std::vector<double> rebuffers;
  std::vector<double> prebuffers;
  std::vector<double> media_means;
  std::vector<double> fluctuations;

  for (const UserTrace& u : run.users) {
    const double end = user_end(run, u);
    bool any_data = false;

    for (const TraceRow& r : u.rows) {
      if (r.t < policy.global_start_s) continue;
      any_data = true;
      overshoot = std::max(overshoot, r.buffer_s - run.target_buffer_s);
      min_buf = std::min(min_buf, r.buffer_s);
      buf_sum += r.buffer_s;
      ++buf_n;
    }

    if (end > policy.global_start_s)
      rebuffers.push_back(rebuffer_total(u, policy.global_start_s, end));

    if (!policy.prebuffer_churn_only || u.arrival_s > policy.churn_cutoff_s) {
      for (const ClientEvent& e : u.events)
        if (e.type == ClientEventType::kStartupComplete) {
          prebuffers.push_back(e.value);
          break;
        }
    }

    const double quality_start =
        std::max(policy.global_start_s, u.arrival_s + policy.per_user_skip_s);
    double rate_sum = 0.0;
    int played = 0;
    int changes = 0;
    double prev = -1.0;
    for (const ClientEvent& e : u.events) {
      if (e.type != ClientEventType::kPlayStart || e.t < quality_start) continue;
      rate_sum += e.value;
      if (played > 0 && e.value != prev) ++changes;
      prev = e.value;
      ++played;
    }
    if (played > 0) {
      any_data = true;
      media_means.push_back(rate_sum / played);
      if (played > 1)
        fluctuations.push_back(static_cast<double>(changes) / (played - 1));
    }
    if (!any_data) ++rep.users_empty_after_trim;
  }

  if (buf_n > 0) {
    rep.max_overshoot_s = overshoot;
    rep.min_buffer_s = min_buf;
    rep.mean_buffer_s = buf_sum / static_cast<double>(buf_n);
  }
  if (!rebuffers.empty()) {
    double sum = 0.0;
    for (double v : rebuffers) {
      sum += v;
      rep.rebuffer_max_s = std::max(rep.rebuffer_max_s, v);
    }
    rep.rebuffer_mean_s = sum / static_cast<double>(rebuffers.size());
  }
  rep.prebuffer_count = static_cast<int>(prebuffers.size());
  if (!prebuffers.empty()) {
    double sum = 0.0;
    for (double v : prebuffers) {
      sum += v;
      rep.prebuffer_max_s = std::max(rep.prebuffer_max_s, v);
    }
    rep.prebuffer_mean_s = sum / static_cast<double>(prebuffers.size());
  }
  if (!media_means.empty()) {
    double sum = 0.0;
    for (double v : media_means) sum += v;
    rep.mean_media_rate_bps = sum / static_cast<double>(media_means.size());
    rep.fairness_iqr_bps =
        quantile_linear(media_means, 0.75) - quantile_linear(media_means, 0.25);
  }
  if (!fluctuations.empty()) {
    double sum = 0.0;
    for (double v : fluctuations) sum += v;
    rep.fluctuation_fraction = sum / static_cast<double>(fluctuations.size());
  }
  return rep;
}

Stat reduce(std::span<const double> per_run) {
  Stat s;
  if (per_run.empty()) return s;
  std::vector<double> v(per_run.begin(), per_run.end());
  double sum = 0.0;
  s.max = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    sum += x;
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  s.p10 = quantile_linear(v, 0.10);
  s.p90 = quantile_linear(v, 0.90);
  return s;
}

AggregateSummary aggregate(std::span<const MetricsReport> reports) {
  AggregateSummary agg;
  agg.runs = static_cast<int>(reports.size());
  if (reports.empty()) return agg;
  auto gather = [&](double MetricsReport::*field) {
    std::vector<double> v;
    v.reserve(reports.size());
    for (const MetricsReport& r : reports) v.push_back(r.*field);
    return reduce(v);
  };
  agg.max_overshoot_s = gather(&MetricsReport::max_overshoot_s);
  agg.min_buffer_s = gather(&MetricsReport::min_buffer_s);
  agg.mean_buffer_s = gather(&MetricsReport::mean_buffer_s);
  agg.rebuffer_mean_s = gather(&MetricsReport::rebuffer_mean_s);
  agg.rebuffer_max_s = gather(&MetricsReport::rebuffer_max_s);
  agg.prebuffer_mean_s = gather(&MetricsReport::prebuffer_mean_s);
  agg.prebuffer_max_s = gather(&MetricsReport::prebuffer_max_s);
  agg.mean_media_rate_bps = gather(&MetricsReport::mean_media_rate_bps);
  agg.fluctuation_fraction = gather(&MetricsReport::fluctuation_fraction);
  agg.fairness_iqr_bps = gather(&MetricsReport::fairness_iqr_bps);
  return agg;
}

std::vector<double> prebuffer_delays(const RunTrace& run, const TrimPolicy& policy) {
  std::vector<double> delays;
  for (const UserTrace& u : run.users) {
    if (policy.prebuffer_churn_only && u.arrival_s <= policy.churn_cutoff_s) continue;
    for (const ClientEvent& e : u.events)
      if (e.type == ClientEventType::kStartupComplete) {
        delays.push_back(e.value);
        break;
      }
  }
  return delays;
}

}  // namespace scsim
