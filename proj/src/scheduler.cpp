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

#include "scsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "scsim/lp.hpp"

namespace scsim::sched {
namespace {

constexpr double kEps = 1e-6;    // relative slack when fixing stage optima
constexpr double kScale = 1e-6;  // solve in Mbit/s for conditioning

std::string describe(const char* stage, lp::Status st) {
  std::string s = "cascade stage ";
  s += stage;
  s += ": ";
  s += lp::status_name(st);
  return s;
}

// Clamp stray negatives and renormalize any helper whose airtime exceeds 1,
// then recompute throughputs, so C1/C2 hold exactly on the returned object.
void repair(const SlotProblem& p, Allocation& a) {
  const std::size_t nu = p.num_users();
  const int nh = p.num_helpers;
  for (double& v : a.alpha)
    if (v < 0.0) v = 0.0;
  for (int h = 0; h < nh; ++h) {
    double s = 0.0;
    for (std::size_t u = 0; u < nu; ++u) s += a.alpha[u * nh + h];
    if (s > 1.0) {
      double inv = 1.0 / s;
      for (std::size_t u = 0; u < nu; ++u) a.alpha[u * nh + h] *= inv;
    }
  }
  for (std::size_t u = 0; u < nu; ++u) {
    double c = 0.0;
    for (int h = 0; h < nh; ++h) c += a.alpha[u * nh + h] * p.rate(u, h);
    a.throughput[u] = c;
  }
}

}  // namespace

double nearest_rank(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  // ceil with a small nudge so exact products like 0.1*20 do not land on
  // the next rank through floating-point excess
  auto r =
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  r = std::max<std::size_t>(r, 1);
  r = std::min(r, n);
  return values[r - 1];
}

std::vector<double> raise_demands(const std::vector<double>& rho) {
  const double rho10 = nearest_rank(rho, 0.10);
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::max(rho[i], rho10);
  return out;
}

Allocation solve_cascade(const SlotProblem& p) {
  const std::size_t nu = p.num_users();
  const int nh = p.num_helpers;
  Allocation a;
  a.raised.assign(nu, 0.0);
  a.caps.assign(nu, 0.0);
  a.alpha.assign(nu * nh, 0.0);
  a.throughput.assign(nu, 0.0);
  a.unserved.assign(nu, 0);
  if (nu == 0) return a;

  std::vector<std::size_t> served;
  for (std::size_t u = 0; u < nu; ++u) {
    bool any = false;
    for (int h = 0; h < nh && !any; ++h) any = p.rate(u, h) > 0.0;
    if (any)
      served.push_back(u);
    else
      a.unserved[u] = 1;
  }
  if (served.empty()) return a;

  std::vector<double> rho_served(served.size());
  for (std::size_t i = 0; i < served.size(); ++i)
    rho_served[i] = p.demands[served[i]];
  const std::vector<double> raised = raise_demands(rho_served);
  const double rho50 = nearest_rank(raised, 0.50);
  for (std::size_t i = 0; i < served.size(); ++i)
    a.raised[served[i]] = raised[i];

  lp::SimplexModel mdl;
  const int v_theta = mdl.add_var(1.0);
  const int v_min = mdl.add_var(0.0);

  struct Link {
    std::size_t slot;  // index into `served`
    int helper;
    double rate_mbps;
    int var;
  };
  std::vector<Link> links;
  std::vector<char> helper_used(nh, 0);
  for (std::size_t i = 0; i < served.size(); ++i) {
    for (int h = 0; h < nh; ++h) {
      double c = p.rate(served[i], h);
      if (c <= 0.0) continue;
      links.push_back({i, h, c * kScale, mdl.add_var(0.0)});
      helper_used[h] = 1;
    }
  }

  // Stage 1: max theta  s.t.  theta * D_u - c_u <= 0, airtime per helper <= 1.
  std::vector<int> helper_row(nh, -1);
  for (int h = 0; h < nh; ++h)
    if (helper_used[h]) helper_row[h] = mdl.add_row(1.0);
  std::vector<int> cov_row(served.size());
  for (std::size_t i = 0; i < served.size(); ++i) {
    cov_row[i] = mdl.add_row(0.0);
    mdl.add_entry(v_theta, cov_row[i], raised[i] * kScale);
  }
  for (const Link& l : links) {
    mdl.add_entry(l.var, helper_row[l.helper], 1.0);
    mdl.add_entry(l.var, cov_row[l.slot], -l.rate_mbps);
  }
  lp::Status st = mdl.optimize();
  if (st != lp::Status::kOptimal)
    throw SolverFailure(describe("1", st), mdl.to_text());
  const double theta = mdl.objective();

  // Stage 2: max m  s.t.  m - c_u <= 0, theta held at its optimum.
  mdl.set_objective_coeff(v_theta, 0.0);
  mdl.set_objective_coeff(v_min, 1.0);
  const int thf_row = mdl.add_row(-theta * (1.0 - kEps));
  mdl.add_entry(v_theta, thf_row, -1.0);
  std::vector<int> min_row(served.size());
  for (std::size_t i = 0; i < served.size(); ++i) {
    min_row[i] = mdl.add_row(0.0);
    mdl.add_entry(v_min, min_row[i], 1.0);
  }
  for (const Link& l : links)
    mdl.add_entry(l.var, min_row[l.slot], -l.rate_mbps);
  st = mdl.optimize();
  if (st != lp::Status::kOptimal)
    throw SolverFailure(describe("2", st), mdl.to_text());
  const double cmin = mdl.objective();

  // Stage 3: max total throughput, both floors held, per-user cap near twice
  // the median demand. The cap is widened to the user's own stage-1 floor
  // when that floor exceeds it, otherwise the two constraints could separate
  // the feasible region into nothing.
  mdl.set_objective_coeff(v_min, 0.0);
  for (const Link& l : links) mdl.set_objective_coeff(l.var, l.rate_mbps);
  const int mnf_row = mdl.add_row(-cmin * (1.0 - kEps));
  mdl.add_entry(v_min, mnf_row, -1.0);
  const double cap_mbps = 2.0 * std::max(cmin, rho50 * kScale);
  std::vector<int> cap_row(served.size());
  for (std::size_t i = 0; i < served.size(); ++i) {
    double u_cap =
        std::max(cap_mbps, theta * (1.0 - kEps) * raised[i] * kScale);
    a.caps[served[i]] = u_cap / kScale;
    cap_row[i] = mdl.add_row(u_cap);
  }
  for (const Link& l : links) mdl.add_entry(l.var, cap_row[l.slot], l.rate_mbps);
  st = mdl.optimize();
  if (st != lp::Status::kOptimal)
    throw SolverFailure(describe("3", st), mdl.to_text());

  a.theta_star = theta;
  a.c_min_star = cmin / kScale;
  a.cap_bps = cap_mbps / kScale;
  a.lp_iterations = mdl.iterations();
  for (const Link& l : links)
    a.alpha[served[l.slot] * nh + l.helper] = mdl.var_value(l.var);
  repair(p, a);
  return a;
}

Allocation baseline_schedule(const SlotProblem& p) {
  const std::size_t nu = p.num_users();
  const int nh = p.num_helpers;
  Allocation a;
  a.raised = p.demands;
  a.caps.assign(nu, 0.0);
  a.alpha.assign(nu * nh, 0.0);
  a.throughput.assign(nu, 0.0);
  a.unserved.assign(nu, 0);

  std::vector<int> best(nu, -1);
  std::vector<int> attached(nh, 0);
  for (std::size_t u = 0; u < nu; ++u) {
    double best_rate = 0.0;
    for (int h = 0; h < nh; ++h) {
      double c = p.rate(u, h);
      if (c > best_rate) {
        best_rate = c;
        best[u] = h;
      }
    }
    if (best[u] >= 0)
      ++attached[best[u]];
    else
      a.unserved[u] = 1;
  }
  for (std::size_t u = 0; u < nu; ++u) {
    if (best[u] < 0) continue;
    double share = 1.0 / attached[best[u]];
    a.alpha[u * nh + best[u]] = share;
    a.throughput[u] = share * p.rate(u, best[u]);
  }
  return a;
}

AuditReport audit_allocation(const SlotProblem& p, const Allocation& a,
                             bool cascade) {
  AuditReport rep;
  const std::size_t nu = p.num_users();
  const int nh = p.num_helpers;
  char buf[256];
  auto fail = [&](const char* fmt, double x, double y) {
    std::snprintf(buf, sizeof buf, fmt, x, y);
    rep.ok = false;
    if (!rep.detail.empty()) rep.detail += "; ";
    rep.detail += buf;
  };

  for (std::size_t i = 0; i < a.alpha.size(); ++i)
    if (a.alpha[i] < 0.0) {
      fail("alpha[%g] negative: %g", static_cast<double>(i), a.alpha[i]);
      break;
    }
  for (int h = 0; h < nh; ++h) {
    double s = 0.0;
    for (std::size_t u = 0; u < nu; ++u) s += a.alpha[u * nh + h];
    if (s > 1.0 + 1e-9) {
      fail("helper %g airtime %.12g > 1", static_cast<double>(h), s);
      break;
    }
  }
  for (std::size_t u = 0; u < nu; ++u) {
    double c = 0.0;
    for (int h = 0; h < nh; ++h) c += a.alpha[u * nh + h] * p.rate(u, h);
    if (std::abs(c - a.throughput[u]) > 1e-6 * std::max(1.0, std::abs(c))) {
      fail("throughput mismatch user %g: %g", static_cast<double>(u),
           c - a.throughput[u]);
      break;
    }
    if (a.unserved[u] && a.throughput[u] != 0.0)
      fail("unserved user %g has throughput %g", static_cast<double>(u),
           a.throughput[u]);
  }
  if (cascade) {
    constexpr double kAbs = 1e-3;  // bit/s; absorbs repair-scale nudges
    for (std::size_t u = 0; u < nu; ++u) {
      if (a.unserved[u]) continue;
      double d = a.raised[u];
      double c = a.throughput[u];
      if (c < a.theta_star * (1.0 - kEps) * d * (1.0 - 1e-9) - kAbs)
        fail("coverage floor violated: c=%g need %g", c,
             a.theta_star * (1.0 - kEps) * d);
      if (c < a.c_min_star * (1.0 - kEps) * (1.0 - 1e-9) - kAbs)
        fail("min-rate floor violated: c=%g need %g", c,
             a.c_min_star * (1.0 - kEps));
      if (c > a.caps[u] * (1.0 + kEps) + kAbs)
        fail("cap exceeded: c=%g cap %g", c, a.caps[u]);
    }
  }
  return rep;
}

}  // namespace scsim::sched
