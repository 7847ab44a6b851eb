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

#include "scsim/validate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numeric>

#include "scsim/channel.hpp"
#include "scsim/control.hpp"
#include "scsim/rng.hpp"
#include "scsim/scheduler.hpp"

namespace scsim {

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

std::string join_mbps(const std::vector<double>& v, double scale) {
  std::string s;
  for (double x : v) {
    if (!s.empty()) s += ", ";
    s += format("%.5f", x / scale);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Independent fixed-step RK4 integrators. These deliberately avoid the
// adaptive machinery in control.cpp; they share only the model definition.

// Unsaturated loop in (x, v) with v = y - c, v(0) = -c.
double rk4_unsaturated(const Gains& g, double x0, double t_end, double h,
                       double* checkpoints, const double* at, int n_at) {
  double x = x0, v = -g.c(), t = 0.0;
  const double a = g.a(), b = g.b();
  int next = 0;
  auto fx = [&](double xx, double vv) { return a * xx + vv; };
  auto fv = [&](double xx) { return b * xx; };
  long steps = static_cast<long>(std::llround(t_end / h));
  for (long i = 0; i < steps; ++i) {
    double k1x = fx(x, v), k1v = fv(x);
    double k2x = fx(x + 0.5 * h * k1x, v + 0.5 * h * k1v), k2v = fv(x + 0.5 * h * k1x);
    double k3x = fx(x + 0.5 * h * k2x, v + 0.5 * h * k2v), k3v = fv(x + 0.5 * h * k2x);
    double k4x = fx(x + h * k3x, v + h * k3v), k4v = fv(x + h * k3x);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t = static_cast<double>(i + 1) * h;
    while (next < n_at && at[next] <= t + 1e-12) checkpoints[next++] = x;
  }
  return x;
}

// Saturated anti-windup loop; mirrors the defining piecewise dynamics with a
// plain RK4 step and the post-step integrator clamp.
struct XY {
  double x, y;
};

XY saturated_rhs(double x, double y, const Gains& g, const SaturationBounds& b) {
  double u = std::clamp(g.a() * x + y, g.c() - 1.0, b.g_max + g.c() - 1.0);
  double ylo = g.c() - b.g_i_max, yhi = g.c() + b.g_i_max;
  double dy = g.b() * x;
  if (y <= ylo)
    dy = std::max(0.0, dy);
  else if (y >= yhi)
    dy = std::min(0.0, dy);
  return {u - g.c(), dy};
}

XY rk4_saturated(XY s, const Gains& g, const SaturationBounds& b, double dt,
                 double h) {
  long steps = static_cast<long>(std::ceil(dt / h - 1e-12));
  double done = 0.0;
  for (long i = 0; i < steps; ++i) {
    double step = std::min(h, dt - done);
    XY k1 = saturated_rhs(s.x, s.y, g, b);
    XY k2 = saturated_rhs(s.x + 0.5 * step * k1.x, s.y + 0.5 * step * k1.y, g, b);
    XY k3 = saturated_rhs(s.x + 0.5 * step * k2.x, s.y + 0.5 * step * k2.y, g, b);
    XY k4 = saturated_rhs(s.x + step * k3.x, s.y + step * k3.y, g, b);
    s.x += step / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.y += step / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    s.y = std::clamp(s.y, g.c() - b.g_i_max, g.c() + b.g_i_max);
    done += step;
  }
  return s;
}

// Stable gain sampler. Keeps the slow eigenvalue fast enough that the
// long-horizon convergence split at t = 1e4 is unambiguous.
Gains sample_stable(CounterRng& rng, int index) {
  double kd = (index % 2 == 0) ? 0.0 : 0.5;
  double a = -(0.05 + 0.95 * rng.uniform());
  double b;
  if (index % 4 < 2)
    b = -(a * a) * (0.5 + 3.5 * rng.uniform());  // complex root pair
  else
    b = -(a * a / 4.0) * (0.25 + 0.70 * rng.uniform());  // distinct real roots
  Gains g;
  g.kd = kd;
  g.kp = a * (1.0 - kd);
  g.ki = b * (1.0 - kd);
  return g;
}

Gains sample_violating(CounterRng& rng, int index) {
  double kd = (index % 2 == 0) ? 0.0 : 0.5;
  double mag = 0.05 + 0.5 * rng.uniform();
  Gains g;
  g.kd = kd;
  switch (index % 3) {
    case 0:  // positive proportional gain: a > 0
      g.kp = mag * (1.0 - kd);
      g.ki = -0.01 * (1.0 - kd);
      break;
    case 1:  // positive integral gain: b > 0
      g.kp = -mag * (1.0 - kd);
      g.ki = 0.01 * (1.0 - kd);
      break;
    default:  // zero integral gain: marginal, settles away from zero
      g.kp = -mag * (1.0 - kd);
      g.ki = 0.0;
      break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Brute-force cascade oracle: grid over per-helper airtime columns restricted
// to full utilization (sum over users = 1), which is weakly optimal for every
// stage objective. Shapes small enough enumerate the 1e-3 grid outright; the
// 3-user/2-helper shape runs a coarse global pass and refines the leading
// plateau candidates down to step 1e-3 with box recentring.

struct GridInstance {
  int H = 0, U = 0;
  std::vector<double> rates;  // [u*H + h], Mbps
  std::vector<double> rho;    // Mbps
};

struct GridPoint {
  std::array<std::array<double, 3>, 2> alpha{};  // [helper][user]
};

struct GridOracle {
  const GridInstance& inst;
  std::vector<char> served;
  std::vector<int> sidx;      // served user indices
  std::vector<double> D;      // raised demands over served users
  double rho50 = 0.0;
  std::vector<char> useful_helper;
  int num_useful = 0;

  explicit GridOracle(const GridInstance& gi) : inst(gi) {
    served.assign(inst.U, 0);
    for (int u = 0; u < inst.U; ++u)
      for (int h = 0; h < inst.H; ++h)
        if (inst.rates[u * inst.H + h] > 0.0) served[u] = 1;
    for (int u = 0; u < inst.U; ++u)
      if (served[u]) sidx.push_back(u);
    std::vector<double> rho_s;
    for (int u : sidx) rho_s.push_back(inst.rho[u]);
    if (!rho_s.empty()) {
      std::vector<double> sorted = rho_s;
      std::sort(sorted.begin(), sorted.end());
      auto rank = [&](const std::vector<double>& v, double q) {
        int k = static_cast<int>(
            std::ceil(q * static_cast<double>(v.size()) - 1e-9));
        k = std::clamp(k, 1, static_cast<int>(v.size()));
        return v[k - 1];
      };
      double rho10 = rank(sorted, 0.10);
      for (double r : rho_s) D.push_back(std::max(r, rho10));
      std::vector<double> raised_sorted = D;
      std::sort(raised_sorted.begin(), raised_sorted.end());
      rho50 = rank(raised_sorted, 0.50);
    }
    useful_helper.assign(inst.H, 0);
    for (int h = 0; h < inst.H; ++h)
      for (int u : sidx)
        if (inst.rates[u * inst.H + h] > 0.0) useful_helper[h] = 1;
    for (char c : useful_helper) num_useful += c;
  }

  void throughputs(const GridPoint& p, double* c) const {
    for (std::size_t i = 0; i < sidx.size(); ++i) {
      int u = sidx[i];
      double sum = 0.0;
      for (int h = 0; h < inst.H; ++h)
        sum += p.alpha[h][u] * inst.rates[u * inst.H + h];
      c[i] = sum;
    }
  }

  double theta_of(const double* c) const {
    double th = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sidx.size(); ++i) th = std::min(th, c[i] / D[i]);
    return th;
  }

  double cmin_of(const double* c) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sidx.size(); ++i) m = std::min(m, c[i]);
    return m;
  }

  // Airtime columns with sum = 1 at the given step, the free coordinates
  // confined to [center - radius, center + radius]. radius >= 1 spans the
  // whole simplex.
  std::vector<std::array<double, 3>> columns(double step,
                                             const std::array<double, 3>& center,
                                             double radius) const {
    std::vector<std::array<double, 3>> out;
    int n = static_cast<int>(std::llround(1.0 / step));
    auto bounds = [&](int u) {
      int lo = static_cast<int>(std::floor((center[u] - radius) / step));
      int hi = static_cast<int>(std::ceil((center[u] + radius) / step));
      return std::pair<int, int>(std::max(0, lo), std::min(n, hi));
    };
    if (inst.U == 1) {
      out.push_back({1.0, 0.0, 0.0});
      return out;
    }
    if (inst.U == 2) {
      auto [lo0, hi0] = bounds(0);
      for (int k0 = lo0; k0 <= hi0; ++k0)
        out.push_back({k0 * step, (n - k0) * step, 0.0});
      return out;
    }
    auto [lo0, hi0] = bounds(0);
    auto [lo1, hi1] = bounds(1);
    for (int k0 = lo0; k0 <= hi0; ++k0)
      for (int k1 = lo1; k1 <= std::min(hi1, n - k0); ++k1)
        out.push_back({k0 * step, k1 * step, (n - k0 - k1) * step});
    return out;
  }

  struct Candidate {
    double val;
    GridPoint p;
  };

  // Evaluates the column product inside per-helper boxes, updating the best
  // point and optionally a bounded list of leading candidates.
  template <typename Eval>
  void sweep(const GridPoint& center, double radius, double step, Eval&& eval,
             Candidate& best, std::vector<Candidate>* leaders) const {
    std::array<std::vector<std::array<double, 3>>, 2> cols;
    for (int h = 0; h < inst.H; ++h) {
      if (!useful_helper[h]) {
        cols[h].push_back({0.0, 0.0, 0.0});
        continue;
      }
      std::array<double, 3> c{};
      for (int u = 0; u < inst.U; ++u) c[u] = center.alpha[h][u];
      cols[h] = columns(step, c, radius);
      // The center column itself (a finer-lattice point from an earlier
      // stage) lets the sweep move one helper while holding another on a
      // binding face that the current step cannot represent.
      cols[h].push_back(c);
    }
    if (inst.H == 1) cols[1].push_back({0.0, 0.0, 0.0});
    GridPoint p;
    for (const auto& a0 : cols[0]) {
      p.alpha[0] = a0;
      for (const auto& a1 : cols[1]) {
        p.alpha[1] = a1;
        double v = eval(p);
        if (v > best.val) best = {v, p};
        if (leaders && std::isfinite(v)) {
          if (leaders->size() < 96) {
            leaders->push_back({v, p});
          } else {
            auto worst = std::min_element(
                leaders->begin(), leaders->end(),
                [](const Candidate& a, const Candidate& b) { return a.val < b.val; });
            if (v > worst->val) *worst = {v, p};
          }
        }
      }
    }
  }

  // Maximizes eval (which returns -inf on infeasible points) over the grid.
  // `seed` must be feasible; the result is never worse than it.
  template <typename Eval>
  GridPoint search(GridPoint seed, Eval&& eval) const {
    Candidate best{eval(seed), seed};
    if (inst.U < 3 || num_useful < 2) {
      sweep(seed, 2.0, 1e-3, eval, best, nullptr);
      return best.p;
    }

    std::vector<Candidate> leaders;
    sweep(seed, 2.0, 0.02, eval, best, &leaders);
    std::sort(leaders.begin(), leaders.end(),
              [](const Candidate& a, const Candidate& b) { return a.val > b.val; });
    // One representative per coarse cell keeps distinct plateau regions alive.
    std::vector<Candidate> picked;
    for (const Candidate& c : leaders) {
      bool dup = false;
      for (const Candidate& q : picked) {
        double d = 0.0;
        for (int h = 0; h < inst.H; ++h)
          for (int u = 0; u < inst.U; ++u)
            d = std::max(d, std::abs(c.p.alpha[h][u] - q.p.alpha[h][u]));
        if (d < 0.05) {
          dup = true;
          break;
        }
      }
      if (!dup) picked.push_back(c);
      if (picked.size() >= 12) break;
    }
    // The seed sits on the exact stage faces, off the coarse lattice, so the
    // coarse leaders can all miss its basin; refine from it unconditionally.
    picked.push_back({eval(seed), seed});

    struct Level {
      double step, radius;
      int recenters;
      std::size_t keep;
    };
    const Level levels[] = {{0.004, 0.05, 24, 6}, {0.001, 0.012, 16, 2}};
    for (const Level& lv : levels) {
      for (Candidate& c : picked) {
        for (int it = 0; it < lv.recenters; ++it) {
          Candidate local = c;
          sweep(c.p, lv.radius, lv.step, eval, local, nullptr);
          bool improved =
              local.val > c.val + 1e-12 * std::max(1.0, std::abs(c.val));
          c = local;
          if (!improved) break;
        }
        if (c.val > best.val) best = c;
      }
      std::sort(picked.begin(), picked.end(),
                [](const Candidate& a, const Candidate& b) { return a.val > b.val; });
      if (picked.size() > lv.keep) picked.resize(lv.keep);
    }
    return best.p;
  }
};

struct OracleResult {
  double theta = 0.0;
  double cmin = 0.0;  // Mbps
  std::vector<double> throughput;  // per original user, Mbps, capped
  std::vector<char> served;
};

OracleResult grid_cascade(const GridInstance& inst) {
  GridOracle o(inst);
  OracleResult res;
  res.served = o.served;
  res.throughput.assign(inst.U, 0.0);
  if (o.sidx.empty()) return res;

  const std::size_t ns = o.sidx.size();
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> c(ns);

  GridPoint seed;  // all airtime on the first user; feasible for stage 1
  for (int h = 0; h < inst.H; ++h) seed.alpha[h][0] = 1.0;
  GridPoint p1 = o.search(seed, [&](const GridPoint& p) {
    o.throughputs(p, c.data());
    return o.theta_of(c.data());
  });
  o.throughputs(p1, c.data());
  res.theta = o.theta_of(c.data());

  // The grid needs a mobility margin below the stage optima to move along
  // the binding faces, so a single run answers a slightly relaxed cascade,
  // off by margin times the local tradeoff slopes. Stage outputs are affine
  // in a common relaxation factor while the optimal basis is stable, so two
  // runs at different margins extrapolate back to the 1e-6 slack the exact
  // solver uses.
  struct Relaxed {
    double cmin = 0.0;
    std::vector<double> thr;
  };
  auto run_at = [&](double s) {
    const double f = res.theta * (1.0 - s);
    GridPoint p2 = o.search(p1, [&](const GridPoint& q) {
      o.throughputs(q, c.data());
      if (o.theta_of(c.data()) < f) return -kInf;
      return o.cmin_of(c.data());
    });
    Relaxed out;
    o.throughputs(p2, c.data());
    out.cmin = o.cmin_of(c.data());

    std::vector<double> caps(ns);
    double cap = 2.0 * std::max(out.cmin, o.rho50);
    for (std::size_t i = 0; i < ns; ++i) caps[i] = std::max(cap, f * o.D[i]);
    const double cmin_floor = out.cmin * (1.0 - s);
    GridPoint p3 = o.search(p2, [&](const GridPoint& q) {
      o.throughputs(q, c.data());
      if (o.theta_of(c.data()) < f) return -kInf;
      if (o.cmin_of(c.data()) < cmin_floor) return -kInf;
      double sum = 0.0;
      for (std::size_t i = 0; i < ns; ++i) sum += std::min(c[i], caps[i]);
      return sum;
    });
    o.throughputs(p3, c.data());
    out.thr.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) out.thr[i] = std::min(c[i], caps[i]);
    return out;
  };

  const double s_near = 1e-3, s_far = 5e-3, s_lp = 1e-6;
  Relaxed near = run_at(s_near);
  Relaxed far = run_at(s_far);
  const double lam = (s_near - s_lp) / (s_far - s_near);
  res.cmin = near.cmin + lam * (near.cmin - far.cmin);
  for (std::size_t i = 0; i < ns; ++i)
    res.throughput[o.sidx[i]] =
        std::max(0.0, near.thr[i] + lam * (near.thr[i] - far.thr[i]));
  return res;
}

}  // namespace

CheckResult validate_closed_form(const ValidateOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = "closed-form buffer solution vs RK4";
  CounterRng rng(opt.seed, Stream::kValidate, 1);

  double max_rel = 0.0;
  int checked = 0;
  std::vector<double> at;
  for (int k = 1; k <= 100; ++k) at.push_back(static_cast<double>(k));
  std::vector<double> rk(at.size());

  for (int i = 0; i < opt.stable_triples; ++i) {
    Gains g = sample_stable(rng, i);
    for (int j = 0; j < opt.initial_values; ++j) {
      double x0 = (rng.uniform() * 2.0 - 1.0) * 20.0;
      if (std::abs(x0) < 0.5) x0 = x0 < 0.0 ? -0.5 : 0.5;
      rk4_unsaturated(g, x0, 100.0, 1e-3, rk.data(), at.data(),
                      static_cast<int>(at.size()));
      for (std::size_t k = 0; k < at.size(); ++k) {
        double cf = closed_form_unsaturated(g, x0, at[k]);
        double rel = std::abs(cf - rk[k]) /
                     std::max(std::abs(rk[k]), 1e-3 * std::abs(x0));
        max_rel = std::max(max_rel, rel);
        ++checked;
      }
      double tail = std::abs(closed_form_unsaturated(g, x0, 1e4));
      if (!(tail < 1e-3 * std::abs(x0))) {
        r.detail = format("stable triple (kp=%g ki=%g kd=%g) x0=%g: |x(1e4)|=%g",
                          g.kp, g.ki, g.kd, x0, tail);
        r.seconds = elapsed_s(t0);
        return r;
      }
    }
  }
  if (max_rel > 1e-6) {
    r.detail = format("max relative deviation %.3g exceeds 1e-6", max_rel);
    r.seconds = elapsed_s(t0);
    return r;
  }

  int diverged = 0;
  for (int i = 0; i < opt.violating_triples; ++i) {
    Gains g = sample_violating(rng, i);
    double x0 = 5.0 + 10.0 * rng.uniform();
    double tail = std::abs(closed_form_unsaturated(g, x0, 1e4));
    if (!std::isfinite(tail) || tail >= 1e-3 * x0) {
      ++diverged;
    } else {
      r.detail = format("violating triple (kp=%g ki=%g kd=%g) converged: %g",
                        g.kp, g.ki, g.kd, tail);
      r.seconds = elapsed_s(t0);
      return r;
    }
  }

  r.pass = true;
  r.detail = format(
      "%d comparisons, max relative deviation %.2e; %d/%d violating triples "
      "failed to converge",
      checked, max_rel, diverged, opt.violating_triples);
  r.seconds = elapsed_s(t0);
  return r;
}

CheckResult validate_finish_prediction(const ValidateOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = "segment-finish prediction vs RK4 replay";
  CounterRng rng(opt.seed, Stream::kValidate, 2);

  double max_err = 0.0;
  int done = 0, skipped = 0;
  while (done < opt.finish_pairs) {
    Gains g = sample_stable(rng, done + skipped);
    SaturationBounds b;
    b.g_max = 2.0 + 8.0 * rng.uniform();
    b.g_i_max = 0.05 + 0.45 * rng.uniform();
    ControllerState s;
    s.x = (rng.uniform() * 2.0 - 1.0) * 20.0;
    s.y = g.c() + (rng.uniform() * 2.0 - 1.0) * b.g_i_max;
    s.t = 0.0;
    double tau = 0.5 + 3.5 * rng.uniform();
    auto pred = predict_finish(s, g, b, tau);
    if (!pred) {
      ++skipped;
      if (skipped > 10 * opt.finish_pairs) {
        r.detail = "could not find crossing cases";
        r.seconds = elapsed_s(t0);
        return r;
      }
      continue;
    }
    double delta = pred->t_finish - s.t;
    XY end = rk4_saturated({s.x, s.y}, g, b, delta, 1e-4);
    // Constant-ratio replay lands at x0 + omega*delta = x0 + tau - delta.
    double replay = s.x + pred->omega * delta;
    double err = std::abs(end.x - replay);
    max_err = std::max(max_err, err);
    if (std::abs((s.x + tau - delta) - replay) > 1e-8) {
      r.detail = format("omega inconsistent with crossing time: %g vs %g",
                        replay, s.x + tau - delta);
      r.seconds = elapsed_s(t0);
      return r;
    }
    ++done;
  }
  r.pass = max_err <= 1e-6;
  r.detail = format("%d pairs (%d non-crossing skipped), max endpoint gap %.2e s",
                    done, skipped, max_err);
  r.seconds = elapsed_s(t0);
  return r;
}

CheckResult validate_cascade_oracle(const ValidateOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = "cascade LP vs alpha-grid search";
  CounterRng rng(opt.seed, Stream::kValidate, 3);

  double worst = 0.0;
  long total_iters = 0;
  for (int inst_id = 0; inst_id < opt.cascade_instances; ++inst_id) {
    GridInstance gi;
    while (true) {
      gi.H = 1 + static_cast<int>(rng.uniform() * 2.0);
      gi.U = 1 + static_cast<int>(rng.uniform() * 3.0);
      gi.H = std::min(gi.H, 2);
      gi.U = std::min(gi.U, 3);
      gi.rates.assign(static_cast<std::size_t>(gi.H) * gi.U, 0.0);
      gi.rho.resize(gi.U);
      // Ranges keep the stage optima well above the grid resolution
      // (roughly max rate times the step) so a 1e-2 relative match is
      // meaningful on every instance.
      for (int u = 0; u < gi.U; ++u) {
        gi.rho[u] = 3.0 + 3.0 * rng.uniform();
        for (int h = 0; h < gi.H; ++h)
          if (rng.uniform() > 0.25)
            gi.rates[u * gi.H + h] = 8.0 + 8.0 * rng.uniform();
      }
      // Near-equal rates make the stage-3 argmax ill-conditioned; resample.
      bool distinct = true;
      std::vector<double> nz;
      for (double v : gi.rates)
        if (v > 0.0) nz.push_back(v);
      for (std::size_t i = 0; i < nz.size() && distinct; ++i)
        for (std::size_t j = i + 1; j < nz.size(); ++j)
          if (std::abs(nz[i] - nz[j]) < 0.05 * std::max(nz[i], nz[j])) {
            distinct = false;
            break;
          }
      if (distinct) break;
    }

    sched::SlotProblem p;
    p.num_helpers = gi.H;
    p.demands.resize(gi.U);
    p.rates.resize(gi.rates.size());
    for (int u = 0; u < gi.U; ++u) {
      p.user_ids.push_back(u);
      p.demands[u] = gi.rho[u] * 1e6;
      for (int h = 0; h < gi.H; ++h)
        p.rates[u * gi.H + h] = gi.rates[u * gi.H + h] * 1e6;
    }
    sched::Allocation lp = sched::solve_cascade(p);
    total_iters += lp.lp_iterations;
    OracleResult oracle = grid_cascade(gi);

    auto rel = [](double a, double b) {
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
    };
    double d_theta = rel(lp.theta_star, oracle.theta);
    double d_cmin = rel(lp.c_min_star / 1e6, oracle.cmin);
    double d_c = 0.0;
    for (int u = 0; u < gi.U; ++u) {
      if (static_cast<bool>(lp.unserved[u]) != !oracle.served[u]) {
        r.detail = format("instance %d: served mask mismatch on user %d", inst_id, u);
        r.seconds = elapsed_s(t0);
        return r;
      }
      d_c = std::max(d_c, rel(lp.throughput[u] / 1e6, oracle.throughput[u]));
    }
    double d = std::max({d_theta, d_cmin, d_c});
    worst = std::max(worst, d);
    if (d > 1e-2) {
      r.detail = format(
          "instance %d (H=%d U=%d): theta %.6g vs %.6g, cmin %.6g vs %.6g, "
          "worst throughput gap %.3g; lp thr [%s] vs grid [%s]",
          inst_id, gi.H, gi.U, lp.theta_star, oracle.theta, lp.c_min_star / 1e6,
          oracle.cmin, d_c, join_mbps(lp.throughput, 1e6).c_str(),
          join_mbps(oracle.throughput, 1.0).c_str());
      r.seconds = elapsed_s(t0);
      return r;
    }
  }
  r.pass = true;
  r.detail = format("%d instances within 1e-2 (worst %.2e); %ld simplex iterations",
                    opt.cascade_instances, worst, total_iters);
  r.seconds = elapsed_s(t0);
  return r;
}

CheckResult validate_channel_model(const ValidateOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = "channel worked values and fading-rate Monte Carlo";

  struct Known {
    double got, want;
    const char* what;
  };
  const Known known[] = {
      {pathloss_db(3.0, true, 5.0, 0.0), 57.660367723418815, "LOS pathloss at 3 m"},
      {pathloss_db(3.0, false, 5.0, 0.0), 63.2962624338447, "NLOS pathloss at 3 m"},
      {los_probability(10.0), 0.18673319305520364, "LOS probability at 10 m"},
  };
  for (const Known& k : known) {
    if (std::abs(k.got - k.want) > 5e-5 * std::abs(k.want)) {
      r.detail = format("%s: %.10g, expected %.10g", k.what, k.got, k.want);
      r.seconds = elapsed_s(t0);
      return r;
    }
  }

  // E[log2(1 + X)], X ~ Exp(1), by composite Simpson; cross-checks the
  // closed-form constant e * E1(1) / ln 2 before the Monte-Carlo comparison.
  const double kExpected = 0.8603473822708858;
  {
    const double hi = 80.0;
    const int n = 160000;  // even
    const double h = hi / n;
    double sum = 0.0;
    auto f = [](double x) { return std::log2(1.0 + x) * std::exp(-x); };
    for (int i = 0; i <= n; ++i) {
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * f(i * h);
    }
    double integral = sum * h / 3.0;
    if (std::abs(integral - kExpected) > 1e-9) {
      r.detail = format("quadrature %.12g disagrees with constant %.12g",
                        integral, kExpected);
      r.seconds = elapsed_s(t0);
      return r;
    }
  }

  ChannelParams params;
  params.bandwidth_hz = 1.0;
  params.fading_draws = opt.mc_draws;
  CounterRng rng(opt.seed, Stream::kValidate, 4);
  double mc = link_rate(1.0, {}, params, rng);
  double rel = std::abs(mc - kExpected) / kExpected;
  r.pass = rel <= 1e-2;
  r.detail = format(
      "worked values to 4 digits; MC rate %.6f vs %.6f (rel %.2e, K=%d)", mc,
      kExpected, rel, opt.mc_draws);
  r.seconds = elapsed_s(t0);
  return r;
}

std::vector<CheckResult> validate_all(const ValidateOptions& opt) {
  return {validate_closed_form(opt), validate_finish_prediction(opt),
          validate_cascade_oracle(opt), validate_channel_model(opt)};
}

}  // namespace scsim
