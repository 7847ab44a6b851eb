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

#include "scsim/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scsim {

Vec2 place_user(const Placement& p, double area_w, double area_h, CounterRng& rng) {
  if (p.kind == PlacementKind::kUniform)
    return {rng.uniform() * area_w, rng.uniform() * area_h};
  double cx = 0.5 * area_w, cy = 0.5 * area_h;
  for (;;) {
    double d = rng.exponential() / p.lambda;
    double ang = 2.0 * M_PI * rng.uniform();
    Vec2 pos{cx + d * std::cos(ang), cy + d * std::sin(ang)};
    if (pos.x >= 0.0 && pos.x <= area_w && pos.y >= 0.0 && pos.y <= area_h) return pos;
  }
}

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kExp1: return "1";
    case ExperimentKind::kExp1Star: return "1*";
    case ExperimentKind::kExp2: return "2";
    case ExperimentKind::kExp3: return "3";
  }
  return "?";
}

double ExperimentPlan::arrival_phase_end_s() const {
  if (kind == ExperimentKind::kExp3) return 0.0;
  return static_cast<double>(target_users) / arrival_rate_per_s;
}

double ExperimentPlan::total_duration_s() const {
  if (kind == ExperimentKind::kExp3) return post_phase_s;
  return arrival_phase_end_s() + post_phase_s;
}

ExperimentPlan make_plan(ExperimentKind kind, int users) {
  ExperimentPlan plan;
  plan.kind = kind;
  if (kind == ExperimentKind::kExp3) {
    plan.arrival_rate_per_s = 2.0;
    plan.post_phase_s = users > 0 ? static_cast<double>(users) / plan.arrival_rate_per_s : 500.0;
    plan.target_users =
        static_cast<int>(std::llround(plan.arrival_rate_per_s * plan.post_phase_s));
  } else {
    plan.target_users = users;
  }
  return plan;
}

Engine::Engine(const SimConfig& cfg)
    : cfg_(cfg),
      lib_(build_library(cfg.n_videos, cfg.video_duration_s,
                         cfg.adaptation.segment_duration_s, cfg.ladder_bps, cfg.vbr_sigma,
                         cfg.seed)),
      sampler_(cfg.channel, cfg.seed),
      helpers_(make_helper_grid(cfg.helper_rows, cfg.helper_cols, cfg.area_w_m, cfg.area_h_m)) {
  if (cfg_.slot_s <= 0.0) throw std::invalid_argument("engine: slot must be positive");
  if (cfg_.trace_stride < 1) throw std::invalid_argument("engine: trace stride must be >= 1");

  const ExperimentPlan& plan = cfg_.plan;
  if (plan.kind == ExperimentKind::kExp3) {
    int n = static_cast<int>(
        std::ceil(plan.arrival_rate_per_s * plan.total_duration_s() - 1e-9));
    for (int i = 0; i < n; ++i)
      pop_events_.push_back({static_cast<double>(i) / plan.arrival_rate_per_s, false});
  } else {
    for (int i = 0; i < plan.target_users; ++i)
      pop_events_.push_back({static_cast<double>(i) / plan.arrival_rate_per_s, false});
    if (plan.kind == ExperimentKind::kExp2) {
      int n = static_cast<int>(std::floor(plan.churn_rate_per_s * plan.post_phase_s + 1e-9));
      for (int k = 0; k < n; ++k)
        pop_events_.push_back(
            {plan.arrival_phase_end_s() + static_cast<double>(k) / plan.churn_rate_per_s, true});
    }
  }
  total_slots_ = static_cast<int>(std::llround(plan.total_duration_s() / cfg_.slot_s));

  trace_.kind = plan.kind;
  trace_.seed = cfg_.seed;
  trace_.slot_s = cfg_.slot_s;
  trace_.target_buffer_s = cfg_.adaptation.target_buffer_s;
  trace_.arrival_phase_end_s = plan.arrival_phase_end_s();
  trace_.duration_s = plan.total_duration_s();
}

void Engine::refresh_sgain(ActiveUser& u) const {
  u.sgain.resize(helpers_.size());
  auto uid = static_cast<std::uint32_t>(u.session.user_id());
  auto epoch = static_cast<std::uint32_t>(current_epoch_ < 0 ? 0 : current_epoch_);
  for (std::size_t h = 0; h < helpers_.size(); ++h) {
    double d = distance(u.pos, helpers_[h]);
    SlowLink sl = draw_slow_link(cfg_.seed, uid, static_cast<std::uint32_t>(h), epoch, d,
                                 cfg_.channel);
    u.sgain[h] = cfg_.channel.tx_power * sl.gain_lin;
  }
}

void Engine::add_user(double t) {
  int uid = next_uid_++;
  CounterRng prng(cfg_.seed, Stream::kPlacement, static_cast<std::uint32_t>(uid));
  Vec2 pos = place_user(cfg_.placement, cfg_.area_w_m, cfg_.area_h_m, prng);

  CounterRng mrng(cfg_.seed, Stream::kMediaStart, static_cast<std::uint32_t>(uid));
  int video = std::min(cfg_.n_videos - 1,
                       static_cast<int>(mrng.uniform() * static_cast<double>(cfg_.n_videos)));
  int segs = lib_.videos[static_cast<std::size_t>(video)].num_segments();
  int start = std::min(segs - 1, static_cast<int>(mrng.uniform() * static_cast<double>(segs)));

  UserTrace ut;
  ut.user_id = uid;
  ut.video = video;
  ut.arrival_s = t;
  trace_.users.push_back(std::move(ut));

  ClientMode mode = cfg_.plan.baseline() ? ClientMode::kBaseline : ClientMode::kPid;
  ActiveUser u{ClientSession(uid, video, start, t, &lib_, cfg_.adaptation, cfg_.gains,
                             cfg_.bounds, trace_.users.back().events, mode),
               pos,
               {},
               trace_.users.size() - 1};
  refresh_sgain(u);
  active_.push_back(std::move(u));
}

void Engine::remove_oldest(double t) {
  if (active_.empty()) return;
  trace_.users[active_.front().trace_index].depart_s = t;
  active_.erase(active_.begin());
}

void Engine::process_population(double t) {
  while (next_pop_ < pop_events_.size() && pop_events_[next_pop_].t <= t + 1e-9) {
    if (pop_events_[next_pop_].churn) remove_oldest(t);
    add_user(t);
    ++next_pop_;
  }
}

bool Engine::step() {
  if (slot_ >= total_slots_) return false;
  double t = static_cast<double>(slot_) * cfg_.slot_s;

  long long epoch =
      static_cast<long long>(std::floor(t / cfg_.channel.refresh_period_s + 1e-9));
  bool fresh_epoch = epoch != current_epoch_;
  current_epoch_ = epoch;

  process_population(t);
  if (fresh_epoch)
    for (auto& u : active_) refresh_sgain(u);

  std::size_t nh = helpers_.size();
  problem_.num_helpers = static_cast<int>(nh);
  problem_.user_ids.clear();
  problem_.demands.clear();
  problem_.rates.clear();
  scheduled_.clear();
  rate_row_.resize(nh);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    ActiveUser& u = active_[i];
    if (!u.session.has_inflight()) continue;
    sampler_.sample_rates(static_cast<std::uint32_t>(u.session.user_id()),
                          static_cast<std::uint32_t>(slot_), u.sgain, rate_row_);
    problem_.user_ids.push_back(u.session.user_id());
    problem_.demands.push_back(u.session.demand_bps());
    problem_.rates.insert(problem_.rates.end(), rate_row_.begin(), rate_row_.end());
    scheduled_.push_back(i);
  }

  sched::Allocation alloc;
  bool solved = false;
  if (!problem_.user_ids.empty()) {
    alloc = cfg_.plan.baseline() ? sched::baseline_schedule(problem_) : sched::solve_cascade(problem_);
    solved = true;
    if (cfg_.audit) {
      sched::AuditReport rep = sched::audit_allocation(problem_, alloc, !cfg_.plan.baseline());
      if (!rep.ok)
        throw sched::SolverFailure("allocation audit failed at slot " + std::to_string(slot_) + ": " +
                                rep.detail,
                            "");
    }
    if (observer_) observer_(slot_, problem_, alloc);
  }

  bits_.assign(active_.size(), 0.0);
  double total_thr = 0.0;
  if (solved) {
    for (std::size_t j = 0; j < scheduled_.size(); ++j) {
      bits_[scheduled_[j]] = alloc.throughput[j] * cfg_.slot_s;
      total_thr += alloc.throughput[j];
    }
  }
  for (std::size_t i = 0; i < active_.size(); ++i) {
    ActiveUser& u = active_[i];
    u.session.advance(cfg_.slot_s, bits_[i], trace_.users[u.trace_index].events);
  }

  double t_end = static_cast<double>(slot_ + 1) * cfg_.slot_s;
  if (slot_ % cfg_.trace_stride == 0) {
    for (ActiveUser& u : active_) {
      trace_.users[u.trace_index].rows.push_back({t_end, u.session.phase(),
                                                  u.session.buffer_s(),
                                                  u.session.last_selected_bps(),
                                                  u.session.throughput_bps(),
                                                  u.session.demand_bps()});
    }
  }
  trace_.slots.push_back({t_end, static_cast<int>(active_.size()),
                          static_cast<int>(scheduled_.size()), total_thr, alloc.theta_star,
                          alloc.c_min_star, static_cast<int>(alloc.lp_iterations)});

  ++slot_;
  return slot_ < total_slots_;
}

RunTrace Engine::run() {
  while (step()) {
  }
  return take_trace();
}

RunTrace Engine::take_trace() { return std::move(trace_); }

const ClientSession* Engine::find_session(int user_id) const {
  for (const ActiveUser& u : active_)
    if (u.session.user_id() == user_id) return &u.session;
  return nullptr;
}

}  // namespace scsim
