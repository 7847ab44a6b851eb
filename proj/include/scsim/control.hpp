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

#include <optional>

namespace scsim {

// PID gains acting on the buffer deviation x (seconds relative to target).
// The controller output is the download/playback rate ratio; in reduced form
//   dx/dt = [a*x + y] - c,   dy/dt = b*x (conditionally integrated)
// with a = Kp/(1-Kd), b = Ki/(1-Kd), c = 1/(1-Kd).
struct Gains {
  double kp = -0.05;
  double ki = -1e-5;
  double kd = 0.0;

  double a() const { return kp / (1.0 - kd); }
  double b() const { return ki / (1.0 - kd); }
  double c() const { return 1.0 / (1.0 - kd); }
};

// The rate ratio is clamped to [0, g_max] and the integrator state y to
// [c - g_i_max, c + g_i_max].
struct SaturationBounds {
  double g_max = 10.0;
  double g_i_max = 0.1;
};

struct ControllerState {
  double x = 0.0;  // buffer deviation, seconds
  double y = 0.0;  // integrator state, equals c at equilibrium
  double t = 0.0;
};

struct FinishPrediction {
  double t_finish = 0.0;
  double omega = 0.0;  // mean rate-ratio offset over the download
};

// True iff the unsaturated loop is asymptotically stable: Kd != 1, a < 0,
// b < 0.
bool check_stability(const Gains& g);

// Solution x(t) of the unsaturated loop from x(0) = x0, zero initial
// integral. Repeated-root and distinct-root branches agree within 1e-12 of
// the discriminant a^2 + 4b crossing zero; complex roots are evaluated in
// complex arithmetic and the imaginary residue (< 1e-9) discarded.
double closed_form_unsaturated(const Gains& g, double x0, double t);

// Instantaneous rate ratio [a*x + y] - c + 1, clamped to [0, g_max].
double instantaneous_gain(const ControllerState& s, const Gains& g,
                          const SaturationBounds& bounds);

// Advances the saturated system by dt with an adaptive embedded
// Runge-Kutta 5(4) pair, abs tol 1e-11, rel tol 1e-10; y is clamped to its
// bound after every accepted step.
ControllerState integrate_antiwindup(const ControllerState& s, const Gains& g,
                                     const SaturationBounds& bounds,
                                     double dt);

// (x(t_next) - x(t)) / (t_next - t) under the saturated dynamics. Playing
// out a request at constant ratio 1 + omega reproduces x(t_next) exactly.
double sampled_gain(const ControllerState& s, const Gains& g,
                    const SaturationBounds& bounds, double t_next);

// Smallest t_f > s.t with x(t_f) = x(s.t) + tau - (t_f - s.t): the predicted
// completion of a tau-second segment. The crossing is located by bisection
// to 1e-10 s; std::nullopt if none occurs within 60*tau.
std::optional<FinishPrediction> predict_finish(const ControllerState& s,
                                               const Gains& g,
                                               const SaturationBounds& bounds,
                                               double tau);

// Buffer deviation below which the next request may be issued:
// max(0, x - tau, x - (1 + r_target/c_est) * tau). c_est <= 0 drops the
// third term.
double compute_request_delay(double x, double tau, double r_target,
                             double c_est);

}  // namespace scsim
