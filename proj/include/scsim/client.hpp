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

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "scsim/control.hpp"
#include "scsim/media.hpp"

namespace scsim {

enum class Phase { kPrebuffering, kPlaying, kRebuffering, kRequestDelay };

const char* phase_name(Phase p);

struct AdaptationParams {
  double alpha = 0.5;            // EMA weight on the new throughput estimate
  double window_s = 5.0;         // throughput averaging window T
  double target_buffer_s = 20.0; // x*
  double segment_duration_s = 2.0;
};

enum class ClientEventType {
  kStartupComplete,  // value: prebuffering delay, seconds
  kUnderrun,
  kResume,
  kRequest,    // value: demand rho, bit/s
  kPlayStart,  // value: nominal representation rate, bit/s
};

const char* event_name(ClientEventType t);

struct ClientEvent {
  ClientEventType type;
  double t = 0.0;
  double value = 0.0;
};

// Sliding-window throughput meter. Bits are credited at the slot end time;
// the estimate divides the windowed sum by min(window, session age) so a
// young session is not penalized for the part of the window before it
// existed.
class ThroughputLog {
 public:
  ThroughputLog(double start_time, double window_s)
      : start_(start_time), window_(window_s) {}

  void record(double t, double bits);
  // Prunes samples that left the window, so calls must have nondecreasing t.
  double estimate(double t_now);
  bool empty() const { return samples_.empty(); }

 private:
  double start_;
  double window_;
  double sum_ = 0.0;
  std::deque<std::pair<double, double>> samples_;
};

struct QualityDecision {
  int representation = 0;
  double selected_bps = 0.0;
  double target_bps = 0.0;  // unrounded EMA target r
  double demand_bps = 0.0;  // rho = selected * (1 + omega)
  double omega = 0.0;
  bool divergent = false;
};

// Pure selection rule given the sampled gain: blends the windowed throughput
// into an EMA of the previously selected rate, rounds down to the ladder
// (lowest rung if below all), and reports the demand rho. A non-positive
// 1 + omega is a divergent controller; the rule falls back to the lowest
// rung with rho equal to that rung. The first segment of a session is
// always the lowest rung.
QualityDecision quality_from_omega(double omega, double sma_bps, double prev_selected_bps,
                                   bool first_segment, const AdaptationParams& p,
                                   const std::vector<double>& ladder_bps);

// Full selection at a request instant: predicts the download finish from the
// controller state to obtain omega (0 when no crossing is found), then
// applies quality_from_omega.
QualityDecision select_quality(const ControllerState& s, double sma_bps,
                               double prev_selected_bps, bool first_segment,
                               const Gains& g, const SaturationBounds& bounds,
                               const AdaptationParams& p,
                               const std::vector<double>& ladder_bps);

// kPid runs the controller-driven selection with request pacing; kBaseline
// picks the highest rung below the windowed throughput average and always
// requests back to back.
enum class ClientMode { kPid, kBaseline };

// One streaming session: download progress, playback buffer, phase machine,
// and the per-user controller. Advanced by the engine once per slot with the
// bits delivered during that slot.
class ClientSession {
 public:
  ClientSession(int user_id, int video, int start_segment, double arrival_time,
                const VideoLibrary* lib, const AdaptationParams& params, const Gains& gains,
                const SaturationBounds& bounds, std::vector<ClientEvent>& events,
                ClientMode mode = ClientMode::kPid);

  void advance(double dt, double bits_received, std::vector<ClientEvent>& events);

  int user_id() const { return user_id_; }
  int video() const { return video_; }
  double arrival_time() const { return arrival_; }
  double now() const { return t_; }
  Phase phase() const { return phase_; }
  bool has_inflight() const { return inflight_.has_value(); }
  // Demand rho communicated with the current request; 0 when idle.
  double demand_bps() const { return inflight_ ? demand_bps_ : 0.0; }
  double buffer_s() const;
  double deviation_s() const { return buffer_s() - params_.target_buffer_s; }
  double playhead_s() const { return playhead_; }
  double downloaded_s() const;
  int completed_segments() const { return completed_segments_; }
  double last_selected_bps() const { return prev_selected_bps_; }
  double resume_threshold_s() const { return resume_threshold_; }
  double integrator_y() const { return y_; }
  double throughput_bps() { return log_.estimate(t_); }
  const std::vector<double>& ladder() const;

 private:
  struct Inflight {
    int segment = 0;
    int representation = 0;
    double size_bits = 0.0;
    double received_bits = 0.0;
  };

  void issue_request(std::vector<ClientEvent>& events);
  void update_integrator(double dt);
  void drain(double dt, std::vector<ClientEvent>& events);

  int user_id_;
  int video_;
  int next_segment_;
  double arrival_;
  double t_;
  const VideoLibrary* lib_;
  AdaptationParams params_;
  Gains gains_;
  SaturationBounds bounds_;
  ClientMode mode_;

  Phase phase_ = Phase::kPrebuffering;
  std::optional<Inflight> inflight_;
  std::deque<double> queue_bps_;  // completed, not yet playing; nominal rates
  double current_play_remaining_s_ = 0.0;
  double playhead_ = 0.0;
  int completed_segments_ = 0;

  double y_;  // controller integral state, conditionally integrated
  double prev_selected_bps_ = 0.0;
  double demand_bps_ = 0.0;
  double resume_threshold_ = 0.0;
  bool first_request_done_ = false;
  ThroughputLog log_;
};

}  // namespace scsim
