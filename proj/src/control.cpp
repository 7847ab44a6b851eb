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

#include "scsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace scsim {
namespace {

constexpr double kAtol = 1e-11;
constexpr double kRtol = 1e-10;
constexpr double kBranchTol = 1e-12;  // discriminant split between root cases

struct Deriv {
  double dx, dy;
};

Deriv rhs(double x, double y, const Gains& g, const SaturationBounds& bounds) {
  double a = g.a(), b = g.b(), c = g.c();
  double u = std::clamp(a * x + y, c - 1.0, bounds.g_max + c - 1.0);
  double ylo = c - bounds.g_i_max;
  double yhi = c + bounds.g_i_max;
  double dy;
  if (y <= ylo)
    dy = std::max(0.0, b * x);
  else if (y >= yhi)
    dy = std::min(0.0, b * x);
  else
    dy = b * x;
  return {u - c, dy};
}

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 35.0 / 384.0 - 5179.0 / 57600.0;
constexpr double kE3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
constexpr double kE4 = 125.0 / 192.0 - 393.0 / 640.0;
constexpr double kE5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
constexpr double kE6 = 11.0 / 84.0 - 187.0 / 2100.0;
constexpr double kE7 = -1.0 / 40.0;

struct StepResult {
  double x, y;
  double err;  // scaled error norm, accept when <= 1
};

StepResult dp_step(double x, double y, double h, const Gains& g,
                   const SaturationBounds& bounds) {
  Deriv k1 = rhs(x, y, g, bounds);
  Deriv k2 = rhs(x + h * kA21 * k1.dx, y + h * kA21 * k1.dy, g, bounds);
  Deriv k3 = rhs(x + h * (kA31 * k1.dx + kA32 * k2.dx),
                 y + h * (kA31 * k1.dy + kA32 * k2.dy), g, bounds);
  Deriv k4 = rhs(x + h * (kA41 * k1.dx + kA42 * k2.dx + kA43 * k3.dx),
                 y + h * (kA41 * k1.dy + kA42 * k2.dy + kA43 * k3.dy), g,
                 bounds);
  Deriv k5 = rhs(
      x + h * (kA51 * k1.dx + kA52 * k2.dx + kA53 * k3.dx + kA54 * k4.dx),
      y + h * (kA51 * k1.dy + kA52 * k2.dy + kA53 * k3.dy + kA54 * k4.dy), g,
      bounds);
  Deriv k6 =
      rhs(x + h * (kA61 * k1.dx + kA62 * k2.dx + kA63 * k3.dx + kA64 * k4.dx +
                   kA65 * k5.dx),
          y + h * (kA61 * k1.dy + kA62 * k2.dy + kA63 * k3.dy + kA64 * k4.dy +
                   kA65 * k5.dy),
          g, bounds);

  double x5 = x + h * (kB1 * k1.dx + kB3 * k3.dx + kB4 * k4.dx + kB5 * k5.dx +
                       kB6 * k6.dx);
  double y5 = y + h * (kB1 * k1.dy + kB3 * k3.dy + kB4 * k4.dy + kB5 * k5.dy +
                       kB6 * k6.dy);
  Deriv k7 = rhs(x5, y5, g, bounds);

  double ex = h * (kE1 * k1.dx + kE3 * k3.dx + kE4 * k4.dx + kE5 * k5.dx +
                   kE6 * k6.dx + kE7 * k7.dx);
  double ey = h * (kE1 * k1.dy + kE3 * k3.dy + kE4 * k4.dy + kE5 * k5.dy +
                   kE6 * k6.dy + kE7 * k7.dy);
  double sx = kAtol + kRtol * std::max(std::abs(x), std::abs(x5));
  double sy = kAtol + kRtol * std::max(std::abs(y), std::abs(y5));
  double err = std::max(std::abs(ex) / sx, std::abs(ey) / sy);
  return {x5, y5, err};
}

// Integrates from s to s.t + dt. The callback sees every accepted step as
// (t0, x0, y0, t1, x1, y1); returning false stops the integration there.
template <typename OnStep>
ControllerState integrate_observed(const ControllerState& s, const Gains& g,
                                   const SaturationBounds& bounds, double dt,
                                   OnStep&& on_step) {
  double ylo = g.c() - bounds.g_i_max;
  double yhi = g.c() + bounds.g_i_max;
  double t_end = s.t + dt;
  double t = s.t;
  double x = s.x;
  double y = std::clamp(s.y, ylo, yhi);
  if (dt <= 0.0) return {x, y, t};

  double h = std::min(dt, 0.1);
  const double h_min = 1e-12 * std::max(1.0, std::abs(t_end));
  while (t < t_end) {
    h = std::min(h, t_end - t);
    StepResult r = dp_step(x, y, h, g, bounds);
    if (r.err <= 1.0 || h <= h_min) {
      double t1 = t + h;
      double x1 = r.x;
      double y1 = std::clamp(r.y, ylo, yhi);
      bool keep_going = on_step(t, x, y, t1, x1, y1);
      t = t1;
      x = x1;
      y = y1;
      if (!keep_going) break;
      if (r.err > 0.0)
        h *= std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 5.0);
      else
        h *= 5.0;
    } else {
      h *= std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 1.0);
    }
  }
  return {x, y, t};
}

}  // namespace

bool check_stability(const Gains& g) {
  if (g.kd == 1.0) return false;
  return g.a() < 0.0 && g.b() < 0.0;
}

double closed_form_unsaturated(const Gains& g, double x0, double t) {
  double a = g.a(), b = g.b(), c = g.c();
  double disc = a * a + 4.0 * b;
  if (std::abs(disc) < kBranchTol)
    return (x0 + (0.5 * a * x0 - c) * t) * std::exp(0.5 * a * t);
  std::complex<double> d = std::sqrt(std::complex<double>(disc, 0.0));
  std::complex<double> au(a, 0.0);
  std::complex<double> A = (d * x0 - au * x0 + 2.0 * c) / (2.0 * d);
  std::complex<double> B = (d * x0 + au * x0 - 2.0 * c) / (2.0 * d);
  std::complex<double> xt = A * std::exp(0.5 * (au - d) * t) +
                            B * std::exp(0.5 * (au + d) * t);
  return xt.real();
}

double instantaneous_gain(const ControllerState& s, const Gains& g,
                          const SaturationBounds& bounds) {
  double c = g.c();
  double u = std::clamp(g.a() * s.x + s.y, c - 1.0, bounds.g_max + c - 1.0);
  return u - c + 1.0;
}

ControllerState integrate_antiwindup(const ControllerState& s, const Gains& g,
                                     const SaturationBounds& bounds,
                                     double dt) {
  return integrate_observed(s, g, bounds, dt,
                            [](double, double, double, double, double,
                               double) { return true; });
}

double sampled_gain(const ControllerState& s, const Gains& g,
                    const SaturationBounds& bounds, double t_next) {
  ControllerState e = integrate_antiwindup(s, g, bounds, t_next - s.t);
  return (e.x - s.x) / (t_next - s.t);
}

std::optional<FinishPrediction> predict_finish(const ControllerState& s,
                                               const Gains& g,
                                               const SaturationBounds& bounds,
                                               double tau) {
  // phi(t) = (x(t) - x0) + (t - t0) - tau is nondecreasing since dx/dt >= -1,
  // so the first accepted step with phi >= 0 brackets the unique crossing.
  const double horizon = 60.0 * tau;
  double t0 = s.t;
  double x0 = s.x;
  bool found = false;
  double lo_t = t0, hi_t = t0;
  ControllerState lo_state = s;

  integrate_observed(
      s, g, bounds, horizon,
      [&](double ta, double xa, double ya, double tb, double xb, double) {
        double phi_b = (xb - x0) + (tb - t0) - tau;
        if (phi_b >= 0.0) {
          found = true;
          lo_t = ta;
          hi_t = tb;
          lo_state = {xa, ya, ta};
          return false;
        }
        return true;
      });
  if (!found) return std::nullopt;

  // Bisect inside the bracketing step, re-integrating from its start.
  double lo = lo_t, hi = hi_t;
  // phi moves up to g_max + 1 buffer-seconds per second, so the bracket must
  // be far tighter than the advertised buffer accuracy.
  for (int i = 0; i < 80 && hi - lo > 1e-10; ++i) {
    double mid = 0.5 * (lo + hi);
    ControllerState m =
        integrate_antiwindup(lo_state, g, bounds, mid - lo_state.t);
    double phi = (m.x - x0) + (mid - t0) - tau;
    if (phi >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double t_f = hi;
  ControllerState end =
      integrate_antiwindup(lo_state, g, bounds, t_f - lo_state.t);
  double omega = (end.x - x0) / (t_f - t0);
  return FinishPrediction{t_f, omega};
}

double compute_request_delay(double x, double tau, double r_target,
                             double c_est) {
  double thr = std::max(0.0, x - tau);
  if (c_est > 0.0)
    thr = std::max(thr, x - (1.0 + r_target / c_est) * tau);
  return thr;
}

}  // namespace scsim
