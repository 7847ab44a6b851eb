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

#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "scsim/engine.hpp"
#include "scsim/metrics.hpp"
#include "scsim/traceio.hpp"

using namespace scsim;

namespace {

RunTrace awkward_run() {
  RunTrace run;
  run.kind = ExperimentKind::kExp2;
  run.seed = 123456789012345ull;
  run.slot_s = 0.01;
  run.target_buffer_s = 20.0;
  run.arrival_phase_end_s = 0.1 + 0.2;  // deliberately not representable
  run.duration_s = 1e4 / 3.0;

  UserTrace u;
  u.user_id = 7;
  u.video = 3;
  u.arrival_s = 0.30000000000000004;
  u.depart_s = 104.69999999999999;
  u.rows.push_back({1.0 / 3.0, Phase::kPrebuffering, 0.0, 0.0, 1.23456789012345678e6, 0.0});
  u.rows.push_back({2.0, Phase::kPlaying, 19.999999999999996, 4.5e6, 3.3e6, 2.2e6});
  u.rows.push_back({3.0, Phase::kRebuffering, -1.2345678901234567e-30, 0.5e6, 0.0, 7e6});
  u.rows.push_back({4.0, Phase::kRequestDelay, 20.25, 0.5e6, 0.0, 0.0});
  u.events.push_back({ClientEventType::kRequest, 0.4, 4.5e6});
  u.events.push_back({ClientEventType::kStartupComplete, 1.1, 0.7000000000000001});
  u.events.push_back({ClientEventType::kPlayStart, 1.2, 4.5e6});
  u.events.push_back({ClientEventType::kUnderrun, 50.0, 0.0});
  u.events.push_back({ClientEventType::kResume, 51.5, 1.5});
  run.users.push_back(u);
  return run;
}

bool rows_equal(const UserTrace& a, const UserTrace& b) {
  if (a.rows.size() != b.rows.size() || a.events.size() != b.events.size())
    return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const TraceRow& x = a.rows[i];
    const TraceRow& y = b.rows[i];
    if (x.t != y.t || x.phase != y.phase || x.buffer_s != y.buffer_s ||
        x.representation_bps != y.representation_bps ||
        x.throughput_bps != y.throughput_bps || x.demand_bps != y.demand_bps)
      return false;
  }
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const ClientEvent& x = a.events[i];
    const ClientEvent& y = b.events[i];
    if (x.type != y.type || x.t != y.t || x.value != y.value) return false;
  }
  return true;
}

std::filesystem::path fresh_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("scsim_test_") + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("user trace round trips bit-exactly through a stream") {
  RunTrace run = awkward_run();
  std::ostringstream os;
  write_user_trace(os, run, run.users[0]);

  std::istringstream is(os.str());
  RunTrace meta;
  UserTrace back = read_user_trace(is, meta);

  CHECK(meta.kind == run.kind);
  CHECK(meta.seed == run.seed);
  CHECK(meta.slot_s == run.slot_s);
  CHECK(meta.target_buffer_s == run.target_buffer_s);
  CHECK(meta.arrival_phase_end_s == run.arrival_phase_end_s);
  CHECK(meta.duration_s == run.duration_s);
  CHECK(back.user_id == 7);
  CHECK(back.video == 3);
  CHECK(back.arrival_s == run.users[0].arrival_s);
  CHECK(back.depart_s == run.users[0].depart_s);
  CHECK(rows_equal(back, run.users[0]));
}

TEST_CASE("writing the same trace twice yields identical bytes") {
  RunTrace run = awkward_run();
  std::ostringstream a, b;
  write_user_trace(a, run, run.users[0]);
  write_user_trace(b, run, run.users[0]);
  CHECK(a.str() == b.str());
}

TEST_CASE("run directory round trips every user") {
  RunTrace run = awkward_run();
  UserTrace second = run.users[0];
  second.user_id = 2;
  second.depart_s = -1.0;
  run.users.push_back(second);

  auto dir = fresh_dir("roundtrip");
  CHECK(write_run_traces(dir, run) == 2);
  CHECK(std::filesystem::exists(dir / "user_00007.csv"));
  CHECK(std::filesystem::exists(dir / "user_00002.csv"));

  RunTrace back = read_run_traces(dir);
  REQUIRE(back.users.size() == 2);
  CHECK(back.users[0].user_id == 2);  // sorted by id on read
  CHECK(back.users[1].user_id == 7);
  CHECK(rows_equal(back.users[1], run.users[0]));
  CHECK(back.users[0].depart_s == -1.0);
  CHECK(back.kind == run.kind);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace filenames are zero-padded") {
  CHECK(user_trace_filename(7) == "user_00007.csv");
  CHECK(user_trace_filename(12345) == "user_12345.csv");
}

TEST_CASE("metrics recomputed from disk match the in-memory report exactly") {
  SimConfig cfg;
  cfg.plan = make_plan(ExperimentKind::kExp2, 4);
  cfg.plan.post_phase_s = 10.0;
  cfg.n_videos = 2;
  cfg.video_duration_s = 60.0;
  cfg.seed = 31;
  RunTrace run = Engine(cfg).run();

  auto dir = fresh_dir("metrics");
  write_run_traces(dir, run);
  RunTrace back = read_run_traces(dir);
  std::filesystem::remove_all(dir);

  MetricsReport mem = compute_metrics(run, trim_for(run));
  MetricsReport disk = compute_metrics(back, trim_for(back));
  CHECK(mem.max_overshoot_s == disk.max_overshoot_s);
  CHECK(mem.min_buffer_s == disk.min_buffer_s);
  CHECK(mem.mean_buffer_s == disk.mean_buffer_s);
  CHECK(mem.rebuffer_mean_s == disk.rebuffer_mean_s);
  CHECK(mem.rebuffer_max_s == disk.rebuffer_max_s);
  CHECK(mem.prebuffer_mean_s == disk.prebuffer_mean_s);
  CHECK(mem.prebuffer_max_s == disk.prebuffer_max_s);
  CHECK(mem.prebuffer_count == disk.prebuffer_count);
  CHECK(mem.mean_media_rate_bps == disk.mean_media_rate_bps);
  CHECK(mem.fluctuation_fraction == disk.fluctuation_fraction);
  CHECK(mem.fairness_iqr_bps == disk.fairness_iqr_bps);
  CHECK(mem.users_total == disk.users_total);
}

TEST_CASE("malformed traces are rejected") {
  RunTrace meta;
  auto read_text = [&](const std::string& text) {
    std::istringstream is(text);
    return read_user_trace(is, meta);
  };
  const std::string head =
      "# scsim-trace v1\n"
      "# run experiment=1 seed=1 slot_s=0.01 target_buffer_s=20 "
      "arrival_phase_end_s=0 duration_s=10\n"
      "# user id=0 video=0 arrival_s=0 depart_s=-1\n"
      "# columns t,phase,buffer_s,representation_bps,throughput_bps,demand_bps\n";

  CHECK_THROWS_AS(read_text("no schema\n"), std::runtime_error);
  CHECK_THROWS_AS(read_text(head + "1.0,playing,1,2,3\n"), std::runtime_error);
  CHECK_THROWS_AS(read_text(head + "1.0,floating,1,2,3,4\n"), std::runtime_error);
  CHECK_THROWS_AS(read_text(head + "1.0x,playing,1,2,3,4\n"), std::runtime_error);
  CHECK_THROWS_AS(read_text("# scsim-trace v1\n# wat foo=1\n"), std::runtime_error);
  CHECK_THROWS_AS(read_text("# scsim-trace v1\n1,playing,1,2,3,4\n"),
                  std::runtime_error);

  // The happy path with the same header parses.
  UserTrace ok = read_text(head + "1.0,playing,1,2,3,4\n");
  CHECK(ok.rows.size() == 1);
}

TEST_CASE("reading an empty directory fails") {
  auto dir = fresh_dir("empty");
  std::filesystem::create_directories(dir);
  CHECK_THROWS_AS(read_run_traces(dir), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("allocation dumper writes one row per user") {
  sched::SlotProblem p;
  p.num_helpers = 1;
  p.user_ids = {4, 9};
  p.demands = {4e6, 4e6};
  p.rates = {10e6, 10e6};
  sched::Allocation a = sched::solve_cascade(p);

  std::ostringstream os;
  AllocationDumper dump(os);
  dump(17, p, a);

  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "slot,user,demand_bps,allocated_bps,theta_star,c_min_star");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.rfind("17,", 0) == 0);
  }
  CHECK(rows == 2);
  CHECK(os.str().find("17,4,") != std::string::npos);
  CHECK(os.str().find("17,9,") != std::string::npos);
}
