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

#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "scsim/metrics.hpp"

using namespace scsim;

namespace {

RunTrace empty_run() {
  RunTrace run;
  run.kind = ExperimentKind::kExp3;
  run.target_buffer_s = 20.0;
  run.duration_s = 100.0;
  return run;
}

UserTrace playing_user(int id, double arrival, const std::vector<double>& rates_bps,
                       double first_play = 1.0, double spacing = 2.0) {
  UserTrace u;
  u.user_id = id;
  u.arrival_s = arrival;
  double t = arrival + first_play;
  for (double r : rates_bps) {
    u.events.push_back({ClientEventType::kPlayStart, t, r});
    t += spacing;
  }
  return u;
}

}  // namespace

TEST_CASE("fluctuation counts changes between consecutive played segments") {
  RunTrace run = empty_run();
  run.users.push_back(playing_user(0, 0.0, {1e6, 1e6, 2e6, 2e6, 2e6, 1e6}));
  MetricsReport rep = compute_metrics(run, TrimPolicy{});
  CHECK(rep.fluctuation_fraction == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.mean_media_rate_bps == doctest::Approx(1.5e6).epsilon(1e-12));
}

TEST_CASE("constant user scores zero, alternating user scores one") {
  RunTrace run = empty_run();
  run.users.push_back(playing_user(0, 0.0, {2e6, 2e6, 2e6, 2e6}));
  CHECK(compute_metrics(run, TrimPolicy{}).fluctuation_fraction == 0.0);

  run.users.clear();
  run.users.push_back(playing_user(0, 0.0, {1e6, 2e6, 1e6, 2e6, 1e6}));
  CHECK(compute_metrics(run, TrimPolicy{}).fluctuation_fraction == 1.0);
}

TEST_CASE("fairness is the interquartile range of per-user means") {
  RunTrace run = empty_run();
  for (int i = 0; i < 4; ++i) {
    double r = 1e6 * (i + 1);
    run.users.push_back(playing_user(i, 0.0, {r, r, r}));
  }
  MetricsReport rep = compute_metrics(run, TrimPolicy{});
  CHECK(rep.fairness_iqr_bps == doctest::Approx(1.5e6).epsilon(1e-12));
  CHECK(rep.mean_media_rate_bps == doctest::Approx(2.5e6).epsilon(1e-12));
}

TEST_CASE("IQR shifts with a constant and scales with a factor") {
  auto iqr_of = [](const std::vector<double>& rates) {
    RunTrace run = empty_run();
    for (std::size_t i = 0; i < rates.size(); ++i)
      run.users.push_back(playing_user(static_cast<int>(i), 0.0, {rates[i]}));
    return compute_metrics(run, TrimPolicy{}).fairness_iqr_bps;
  };
  double base = iqr_of({1e6, 2e6, 3e6, 4e6});
  CHECK(iqr_of({3e6, 4e6, 5e6, 6e6}) == doctest::Approx(base).epsilon(1e-12));
  CHECK(iqr_of({2e6, 4e6, 6e6, 8e6}) == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("quantile_linear interpolates between order statistics") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_linear(v, 0.25) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(quantile_linear(v, 0.75) == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(quantile_linear(v, 0.0) == 1.0);
  CHECK(quantile_linear(v, 1.0) == 4.0);
  CHECK(quantile_linear({5.0}, 0.3) == 5.0);
  CHECK_THROWS_AS(quantile_linear({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(quantile_linear({1.0}, 1.5), std::invalid_argument);
}

TEST_CASE("rebuffering pairs underruns with resumes and clips to the window") {
  RunTrace run = empty_run();
  UserTrace u;
  u.user_id = 0;
  u.events.push_back({ClientEventType::kUnderrun, 5.0, 0.0});
  u.events.push_back({ClientEventType::kResume, 8.0, 0.0});
  run.users.push_back(u);

  CHECK(compute_metrics(run, TrimPolicy{}).rebuffer_mean_s == doctest::Approx(3.0));

  TrimPolicy clipped;
  clipped.global_start_s = 6.0;
  CHECK(compute_metrics(run, clipped).rebuffer_mean_s == doctest::Approx(2.0));

  SUBCASE("an unresolved underrun counts until the session ends") {
    run.users[0].events.push_back({ClientEventType::kUnderrun, 90.0, 0.0});
    CHECK(compute_metrics(run, TrimPolicy{}).rebuffer_mean_s == doctest::Approx(13.0));
    run.users[0].depart_s = 95.0;
    CHECK(compute_metrics(run, TrimPolicy{}).rebuffer_mean_s == doctest::Approx(8.0));
  }
  SUBCASE("a resume without a prior underrun is ignored") {
    RunTrace odd = empty_run();
    UserTrace w;
    w.events.push_back({ClientEventType::kResume, 3.0, 0.0});
    odd.users.push_back(w);
    CHECK(compute_metrics(odd, TrimPolicy{}).rebuffer_mean_s == 0.0);
  }
}

TEST_CASE("user with zero underruns accrues zero rebuffering") {
  RunTrace run = empty_run();
  run.users.push_back(playing_user(0, 0.0, {1e6, 1e6}));
  MetricsReport rep = compute_metrics(run, TrimPolicy{});
  CHECK(rep.rebuffer_mean_s == 0.0);
  CHECK(rep.rebuffer_max_s == 0.0);
}

TEST_CASE("trim policies follow the experiment") {
  RunTrace run = empty_run();
  run.arrival_phase_end_s = 4.0;

  run.kind = ExperimentKind::kExp1;
  TrimPolicy p = trim_for(run);
  CHECK(p.global_start_s == doctest::Approx(104.0));
  CHECK(p.per_user_skip_s == 0.0);
  CHECK_FALSE(p.prebuffer_churn_only);

  run.kind = ExperimentKind::kExp1Star;
  CHECK(trim_for(run).global_start_s == doctest::Approx(104.0));

  run.kind = ExperimentKind::kExp2;
  p = trim_for(run);
  CHECK(p.global_start_s == doctest::Approx(104.0));
  CHECK(p.per_user_skip_s == doctest::Approx(30.0));
  CHECK(p.prebuffer_churn_only);
  CHECK(p.churn_cutoff_s == doctest::Approx(4.0));

  run.kind = ExperimentKind::kExp3;
  p = trim_for(run);
  CHECK(p.global_start_s == 0.0);
  CHECK(p.per_user_skip_s == doctest::Approx(30.0));
  CHECK_FALSE(p.prebuffer_churn_only);
}

TEST_CASE("prebuffering honors the churn filter") {
  RunTrace run = empty_run();
  UserTrace early;
  early.user_id = 0;
  early.arrival_s = 1.0;
  early.events.push_back({ClientEventType::kStartupComplete, 1.8, 0.8});
  UserTrace late;
  late.user_id = 1;
  late.arrival_s = 6.0;
  late.events.push_back({ClientEventType::kStartupComplete, 7.1, 1.1});
  run.users = {early, late};

  MetricsReport all = compute_metrics(run, TrimPolicy{});
  CHECK(all.prebuffer_count == 2);
  CHECK(all.prebuffer_mean_s == doctest::Approx(0.95));
  CHECK(all.prebuffer_max_s == doctest::Approx(1.1));

  TrimPolicy churn;
  churn.prebuffer_churn_only = true;
  churn.churn_cutoff_s = 4.0;
  MetricsReport filtered = compute_metrics(run, churn);
  CHECK(filtered.prebuffer_count == 1);
  CHECK(filtered.prebuffer_mean_s == doctest::Approx(1.1));

  CHECK(prebuffer_delays(run, TrimPolicy{}) == std::vector<double>{0.8, 1.1});
  CHECK(prebuffer_delays(run, churn) == std::vector<double>{1.1});
}

TEST_CASE("buffer statistics start at the global trim point") {
  RunTrace run = empty_run();
  UserTrace u;
  u.user_id = 0;
  u.rows.push_back({1.0, Phase::kPlaying, 100.0, 1e6, 1e6, 1e6});
  u.rows.push_back({50.0, Phase::kPlaying, 25.0, 1e6, 1e6, 1e6});
  u.rows.push_back({60.0, Phase::kPlaying, 15.0, 1e6, 1e6, 1e6});
  run.users.push_back(u);

  TrimPolicy p;
  p.global_start_s = 10.0;
  MetricsReport rep = compute_metrics(run, p);
  CHECK(rep.max_overshoot_s == doctest::Approx(5.0));
  CHECK(rep.min_buffer_s == doctest::Approx(15.0));
  CHECK(rep.mean_buffer_s == doctest::Approx(20.0));
}

TEST_CASE("a user trimmed to nothing is reported, not fatal") {
  RunTrace run = empty_run();
  UserTrace gone;
  gone.user_id = 0;
  gone.arrival_s = 0.0;
  gone.rows.push_back({1.0, Phase::kPlaying, 5.0, 1e6, 1e6, 1e6});
  run.users.push_back(gone);
  run.users.push_back(playing_user(1, 0.0, {1e6, 1e6}, 60.0));

  TrimPolicy p;
  p.global_start_s = 50.0;
  MetricsReport rep = compute_metrics(run, p);
  CHECK(rep.users_total == 2);
  CHECK(rep.users_empty_after_trim == 1);
}

TEST_CASE("quality metrics skip each user's early segments") {
  RunTrace run = empty_run();
  UserTrace u = playing_user(0, 10.0, {}, 0.0);
  u.events.push_back({ClientEventType::kPlayStart, 20.0, 5e6});
  u.events.push_back({ClientEventType::kPlayStart, 45.0, 1e6});
  u.events.push_back({ClientEventType::kPlayStart, 47.0, 1e6});
  run.users.push_back(u);

  TrimPolicy p;
  p.per_user_skip_s = 30.0;  // quality window starts at arrival + 30 = 40
  MetricsReport rep = compute_metrics(run, p);
  CHECK(rep.mean_media_rate_bps == doctest::Approx(1e6));
  CHECK(rep.fluctuation_fraction == 0.0);
}

TEST_CASE("reduce computes mean, max, and tail percentiles") {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(static_cast<double>(i));
  Stat s = reduce(v);
  CHECK(s.mean == doctest::Approx(5.5));
  CHECK(s.max == 10.0);
  CHECK(s.p10 == doctest::Approx(1.9));
  CHECK(s.p90 == doctest::Approx(9.1));
}

TEST_CASE("aggregate reduces per run and then across runs") {
  MetricsReport a;
  a.rebuffer_max_s = 3.0;
  a.mean_media_rate_bps = 2e6;
  MetricsReport b;
  b.rebuffer_max_s = 5.0;
  b.mean_media_rate_bps = 4e6;

  AggregateSummary single = aggregate(std::vector<MetricsReport>{a});
  CHECK(single.runs == 1);
  CHECK(single.rebuffer_max_s.mean == 3.0);
  CHECK(single.rebuffer_max_s.max == 3.0);
  CHECK(single.rebuffer_max_s.p10 == 3.0);
  CHECK(single.rebuffer_max_s.p90 == 3.0);

  AggregateSummary both = aggregate(std::vector<MetricsReport>{a, b});
  CHECK(both.runs == 2);
  CHECK(both.rebuffer_max_s.max == 5.0);
  CHECK(both.rebuffer_max_s.mean == doctest::Approx(4.0));
  CHECK(both.mean_media_rate_bps.mean == doctest::Approx(3e6));
}
