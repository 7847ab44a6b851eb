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
#include <functional>
#include <vector>

#include "scsim/channel.hpp"
#include "scsim/client.hpp"
#include "scsim/control.hpp"
#include "scsim/media.hpp"
#include "scsim/rng.hpp"
#include "scsim/scheduler.hpp"

namespace scsim {

enum class PlacementKind { kUniform, kClustered };

struct Placement {
  PlacementKind kind = PlacementKind::kUniform;
  // Rate of the exponential center distance used by the clustered layout;
  // the default puts the median user 2.5 m from the center.
  double lambda = 0.27725887222397810;  // 0.2 * ln 4
};

// Uniform draws land i.i.d. in the area; clustered draws an exponential
// distance from the center and a uniform angle, resampling (never clipping)
// until the point is inside.
Vec2 place_user(const Placement& p, double area_w, double area_h, CounterRng& rng);

enum class ExperimentKind { kExp1, kExp1Star, kExp2, kExp3 };

const char* experiment_name(ExperimentKind k);

// Exp1/1*: arrivals at 10/s until target_users, then a steady phase.
// Exp2: same arrival phase, then replacement churn (oldest user leaves, a
// new one joins) at 2/s. Exp3: constant arrivals at 2/s for the whole run,
// no departures.
struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::kExp1;
  int target_users = 40;
  double arrival_rate_per_s = 10.0;
  double churn_rate_per_s = 2.0;
  double post_phase_s = 400.0;  // steady/churn duration; total duration for Exp3
  bool force_baseline = false;  // run any experiment with the baseline scheme

  bool baseline() const {
    return force_baseline || kind == ExperimentKind::kExp1Star;
  }
  double arrival_phase_end_s() const;
  double total_duration_s() const;
};

ExperimentPlan make_plan(ExperimentKind kind, int users);

struct SimConfig {
  double slot_s = 0.01;
  double area_w_m = 50.0;
  double area_h_m = 50.0;
  int helper_rows = 5;
  int helper_cols = 5;
  ChannelParams channel;
  Gains gains;
  SaturationBounds bounds;
  AdaptationParams adaptation;
  int n_videos = 6;
  double video_duration_s = 600.0;
  std::vector<double> ladder_bps = default_ladder_bps();
  double vbr_sigma = 0.25;
  Placement placement;
  ExperimentPlan plan;
  std::uint64_t seed = 1;
  int trace_stride = 1;  // slots between sampled trace rows
  bool audit = false;    // verify every allocation against its constraints
};

struct TraceRow {
  double t = 0.0;
  Phase phase = Phase::kPrebuffering;
  double buffer_s = 0.0;
  double representation_bps = 0.0;
  double throughput_bps = 0.0;
  double demand_bps = 0.0;
};

struct UserTrace {
  int user_id = 0;
  int video = 0;
  double arrival_s = 0.0;
  double depart_s = -1.0;  // negative while the user never left
  std::vector<TraceRow> rows;
  std::vector<ClientEvent> events;
};

struct SlotStat {
  double t = 0.0;
  int active_users = 0;
  int scheduled_users = 0;
  double total_throughput_bps = 0.0;
  double theta_star = 0.0;
  double c_min_star = 0.0;
  int lp_iterations = 0;
};

struct RunTrace {
  ExperimentKind kind = ExperimentKind::kExp1;
  std::uint64_t seed = 0;
  double slot_s = 0.01;
  double target_buffer_s = 20.0;
  double arrival_phase_end_s = 0.0;
  double duration_s = 0.0;
  std::vector<UserTrace> users;
  std::vector<SlotStat> slots;
};

using AllocationObserver =
    std::function<void(int slot, const sched::SlotProblem&, const sched::Allocation&)>;

// Discrete-time loop over 10 ms slots: population changes, slow-fading
// refresh, per-slot link sampling, scheduling, delivery, and client
// advancement, in that order. Deterministic in (config, seed).
class Engine {
 public:
  explicit Engine(const SimConfig& cfg);

  // Advances one slot; returns false once the plan has completed.
  bool step();
  RunTrace run();
  // Moves the accumulated trace out; the engine is spent afterwards.
  RunTrace take_trace();

  void set_allocation_observer(AllocationObserver obs) { observer_ = std::move(obs); }

  double now() const { return static_cast<double>(slot_) * cfg_.slot_s; }
  int active_users() const { return static_cast<int>(active_.size()); }
  int total_arrivals() const { return next_uid_; }
  const VideoLibrary& library() const { return lib_; }
  const std::vector<Vec2>& helpers() const { return helpers_; }
  const ClientSession* find_session(int user_id) const;

 private:
  struct ActiveUser {
    ClientSession session;
    Vec2 pos;
    std::vector<double> sgain;  // tx_power * slow gain towards each helper
    std::size_t trace_index = 0;
  };
  struct PopEvent {
    double t = 0.0;
    bool churn = false;  // churn replaces the oldest user, plain events only add
  };

  void add_user(double t);
  void remove_oldest(double t);
  void refresh_sgain(ActiveUser& u) const;
  void process_population(double t);

  SimConfig cfg_;
  VideoLibrary lib_;
  LinkSampler sampler_;
  std::vector<Vec2> helpers_;
  std::vector<PopEvent> pop_events_;
  std::size_t next_pop_ = 0;
  std::vector<ActiveUser> active_;
  int next_uid_ = 0;
  int slot_ = 0;
  int total_slots_ = 0;
  long long current_epoch_ = -1;
  RunTrace trace_;
  AllocationObserver observer_;

  // per-slot scratch, reused across slots
  sched::SlotProblem problem_;
  std::vector<std::size_t> scheduled_;
  std::vector<double> bits_;
  std::vector<double> rate_row_;
};

}  // namespace scsim
