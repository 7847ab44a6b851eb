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

#include "scsim/client.hpp"

#include <algorithm>
#include <cmath>

namespace scsim {

namespace {
constexpr double kTimeTol = 1e-12;
constexpr double kBitsTol = 1e-9;
}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kPrebuffering: return "prebuffering";
    case Phase::kPlaying: return "playing";
    case Phase::kRebuffering: return "rebuffering";
    case Phase::kRequestDelay: return "request_delay";
  }
  return "?";
}

const char* event_name(ClientEventType t) {
  switch (t) {
    case ClientEventType::kStartupComplete: return "startup";
    case ClientEventType::kUnderrun: return "underrun";
    case ClientEventType::kResume: return "resume";
    case ClientEventType::kRequest: return "request";
    case ClientEventType::kPlayStart: return "play";
  }
  return "?";
}

void ThroughputLog::record(double t, double bits) {
  if (bits <= 0.0) return;
  samples_.emplace_back(t, bits);
  sum_ += bits;
}

double ThroughputLog::estimate(double t_now) {
  double cutoff = t_now - window_ - kTimeTol;
  while (!samples_.empty() && samples_.front().first < cutoff) {
    sum_ -= samples_.front().second;
    samples_.pop_front();
  }
  if (samples_.empty()) return 0.0;
  double denom = std::min(window_, t_now - start_);
  if (denom <= 0.0) return 0.0;
  return sum_ / denom;
}

QualityDecision quality_from_omega(double omega, double sma_bps, double prev_selected_bps,
                                   bool first_segment, const AdaptationParams& p,
                                   const std::vector<double>& ladder_bps) {
  QualityDecision d;
  d.omega = omega;
  double denom = 1.0 + omega;
  if (denom <= 0.0) {
    d.divergent = true;
    d.representation = 0;
    d.selected_bps = ladder_bps.front();
    d.target_bps = ladder_bps.front();
    d.demand_bps = d.selected_bps;
    return d;
  }
  double r = (1.0 - p.alpha) * prev_selected_bps + p.alpha * sma_bps / denom;
  d.target_bps = r;
  int rep = 0;
  if (!first_segment) {
    for (int i = static_cast<int>(ladder_bps.size()) - 1; i >= 0; --i) {
      if (ladder_bps[static_cast<std::size_t>(i)] <= r) {
        rep = i;
        break;
      }
    }
  }
  d.representation = rep;
  d.selected_bps = ladder_bps[static_cast<std::size_t>(rep)];
  d.demand_bps = d.selected_bps * denom;
  return d;
}

QualityDecision select_quality(const ControllerState& s, double sma_bps,
                               double prev_selected_bps, bool first_segment,
                               const Gains& g, const SaturationBounds& bounds,
                               const AdaptationParams& p,
                               const std::vector<double>& ladder_bps) {
  auto pf = predict_finish(s, g, bounds, p.segment_duration_s);
  double omega = pf ? pf->omega : 0.0;
  return quality_from_omega(omega, sma_bps, prev_selected_bps, first_segment, p, ladder_bps);
}

ClientSession::ClientSession(int user_id, int video, int start_segment, double arrival_time,
                             const VideoLibrary* lib, const AdaptationParams& params,
                             const Gains& gains, const SaturationBounds& bounds,
                             std::vector<ClientEvent>& events, ClientMode mode)
    : user_id_(user_id),
      video_(video),
      next_segment_(start_segment),
      arrival_(arrival_time),
      t_(arrival_time),
      lib_(lib),
      params_(params),
      gains_(gains),
      bounds_(bounds),
      mode_(mode),
      y_(gains.c()),
      prev_selected_bps_(lib->videos[static_cast<std::size_t>(video)].ladder_bps.front()),
      log_(arrival_time, params.window_s) {
  issue_request(events);
}

const std::vector<double>& ClientSession::ladder() const {
  return lib_->videos[static_cast<std::size_t>(video_)].ladder_bps;
}

double ClientSession::buffer_s() const {
  return current_play_remaining_s_ +
         params_.segment_duration_s * static_cast<double>(queue_bps_.size());
}

double ClientSession::downloaded_s() const {
  return params_.segment_duration_s * static_cast<double>(completed_segments_);
}

void ClientSession::update_integrator(double dt) {
  double x = deviation_s();
  double b = gains_.b(), c = gains_.c();
  double lo = c - bounds_.g_i_max, hi = c + bounds_.g_i_max;
  double dy;
  if (y_ <= lo)
    dy = std::max(0.0, b * x);
  else if (y_ >= hi)
    dy = std::min(0.0, b * x);
  else
    dy = b * x;
  y_ = std::clamp(y_ + dy * dt, lo, hi);
}

void ClientSession::issue_request(std::vector<ClientEvent>& events) {
  double sma = log_.estimate(t_);
  const auto& lad = ladder();
  if (mode_ == ClientMode::kBaseline) {
    int rep = 0;
    for (int i = static_cast<int>(lad.size()) - 1; i >= 0; --i) {
      if (lad[static_cast<std::size_t>(i)] <= sma) {
        rep = i;
        break;
      }
    }
    double rate = lad[static_cast<std::size_t>(rep)];
    SegmentRef ref{video_, next_segment_, rep};
    inflight_ = Inflight{next_segment_, rep, segment_size(*lib_, ref, true), 0.0};
    demand_bps_ = rate;
    prev_selected_bps_ = rate;
    first_request_done_ = true;
    events.push_back({ClientEventType::kRequest, t_, rate});
    return;
  }
  ControllerState s{deviation_s(), y_, t_};
  QualityDecision d = select_quality(s, sma, prev_selected_bps_, !first_request_done_, gains_,
                                     bounds_, params_, lad);
  SegmentRef ref{video_, next_segment_, d.representation};
  inflight_ = Inflight{next_segment_, d.representation, segment_size(*lib_, ref, true), 0.0};
  demand_bps_ = d.demand_bps;
  prev_selected_bps_ = d.selected_bps;
  first_request_done_ = true;
  resume_threshold_ =
      compute_request_delay(s.x, params_.segment_duration_s, d.target_bps, sma);
  events.push_back({ClientEventType::kRequest, t_, d.demand_bps});
}

void ClientSession::drain(double dt, std::vector<ClientEvent>& events) {
  double left = dt;
  while (left > kTimeTol) {
    if (current_play_remaining_s_ <= kTimeTol) {
      if (queue_bps_.empty()) {
        current_play_remaining_s_ = 0.0;
        events.push_back({ClientEventType::kUnderrun, t_, 0.0});
        phase_ = Phase::kRebuffering;
        return;
      }
      current_play_remaining_s_ = params_.segment_duration_s;
      events.push_back({ClientEventType::kPlayStart, t_, queue_bps_.front()});
      queue_bps_.pop_front();
    }
    double step = std::min(left, current_play_remaining_s_);
    current_play_remaining_s_ -= step;
    playhead_ += step;
    left -= step;
  }
}

void ClientSession::advance(double dt, double bits_received, std::vector<ClientEvent>& events) {
  update_integrator(dt);
  t_ += dt;

  if (inflight_ && bits_received > 0.0) {
    double credit = std::min(bits_received, inflight_->size_bits - inflight_->received_bits);
    inflight_->received_bits += credit;
    log_.record(t_, credit);
    if (inflight_->received_bits >= inflight_->size_bits - kBitsTol) {
      queue_bps_.push_back(
          ladder()[static_cast<std::size_t>(inflight_->representation)]);
      ++completed_segments_;
      ++next_segment_;
      inflight_.reset();
      if (phase_ == Phase::kPrebuffering) {
        phase_ = Phase::kPlaying;
        events.push_back({ClientEventType::kStartupComplete, t_, t_ - arrival_});
      } else if (phase_ == Phase::kRebuffering) {
        phase_ = Phase::kPlaying;
        events.push_back({ClientEventType::kResume, t_, 0.0});
      }
      if (mode_ == ClientMode::kPid && deviation_s() > resume_threshold_ + kTimeTol)
        phase_ = Phase::kRequestDelay;
      else
        issue_request(events);
    }
  }

  if (phase_ == Phase::kPlaying || phase_ == Phase::kRequestDelay) drain(dt, events);

  if (!inflight_) {
    if (phase_ == Phase::kRequestDelay && deviation_s() <= resume_threshold_ + kTimeTol) {
      phase_ = Phase::kPlaying;
      issue_request(events);
    } else if (phase_ == Phase::kRebuffering) {
      // A delayed request interrupted by an underrun restarts immediately.
      issue_request(events);
    }
  }
}

}  // namespace scsim
