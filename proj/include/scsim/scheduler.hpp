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

#ifndef SCSIM_SCHEDULER_HPP_
#define SCSIM_SCHEDULER_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace scsim::sched {

// One slot's allocation problem: users with positive demands and their
// per-helper link rates. rates[u * num_helpers + h] is the link rate in
// bit/s, 0 meaning no usable link.
struct SlotProblem {
  int num_helpers = 0;
  std::vector<int> user_ids;
  std::vector<double> demands;  // bit/s, > 0
  std::vector<double> rates;    // row-major [user][helper], bit/s

  std::size_t num_users() const { return demands.size(); }
  double rate(std::size_t u, int h) const {
    return rates[u * static_cast<std::size_t>(num_helpers) + h];
  }
};

struct Allocation {
  double theta_star = 0.0;   // stage-1 optimum, dimensionless
  double c_min_star = 0.0;   // stage-2 optimum, bit/s
  double cap_bps = 0.0;      // 2 * max(c_min_star, median raised demand)
  std::vector<double> raised;      // demands after floor-raising, bit/s
  std::vector<double> caps;        // per-user stage-3 upper bound, bit/s
  std::vector<double> alpha;       // row-major [user][helper]
  std::vector<double> throughput;  // c_u, bit/s
  std::vector<char> unserved;      // 1 if the user had no usable link
  long lp_iterations = 0;
};

// Raised by solve_cascade when a stage LP fails; carries the serialized
// instance for offline replay.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::string lp_text)
      : std::runtime_error(what), lp_text_(std::move(lp_text)) {}
  const std::string& lp_text() const { return lp_text_; }

 private:
  std::string lp_text_;
};

// Nearest-rank order statistic: the ceil(q*n)-th smallest value.
double nearest_rank(std::vector<double> values, double q);

// Per-user max(rho_u, rho_10) with rho_10 the nearest-rank 10th percentile.
std::vector<double> raise_demands(const std::vector<double>& rho);

// Three-stage proportional-share cascade:
//   TS1 maximizes the worst demand-coverage ratio min_u c_u / D_u,
//   TS2 maximizes the minimum throughput with the TS1 ratio held,
//   TS3 maximizes total throughput with both floors held and per-user
//       throughput capped near twice the median demand.
// Stage optima are carried forward as constraints with 1e-6 relative slack.
Allocation solve_cascade(const SlotProblem& p);

// Each user attaches to its single highest-rate helper (lowest helper index
// on ties); every helper splits its airtime equally among attached users.
Allocation baseline_schedule(const SlotProblem& p);

// Verifies an allocation against the feasibility and cascade-floor
// invariants. `cascade` enables the stage-floor and cap checks.
struct AuditReport {
  bool ok = true;
  std::string detail;
};
AuditReport audit_allocation(const SlotProblem& p, const Allocation& a,
                             bool cascade);

}  // namespace scsim::sched

#endif  // SCSIM_SCHEDULER_HPP_
