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

#include <doctest.h>

#include "scsim/lp.hpp"

using scsim::lp::SimplexModel;
using scsim::lp::Status;

TEST_CASE("two-variable maximum at a vertex") {
  SimplexModel m;
  int x = m.add_var(3.0);
  int y = m.add_var(2.0);
  int r1 = m.add_row(4.0);
  int r2 = m.add_row(6.0);
  m.add_entry(x, r1, 1.0);
  m.add_entry(y, r1, 1.0);
  m.add_entry(x, r2, 1.0);
  m.add_entry(y, r2, 3.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(12.0));
  CHECK(m.var_value(x) == doctest::Approx(4.0));
  CHECK(m.var_value(y) == doctest::Approx(0.0));
}

TEST_CASE("degenerate corner") {
  SimplexModel m;
  int x = m.add_var(1.0);
  int y = m.add_var(1.0);
  int r1 = m.add_row(1.0);
  int r2 = m.add_row(1.0);
  int r3 = m.add_row(2.0);
  m.add_entry(x, r1, 1.0);
  m.add_entry(y, r2, 1.0);
  m.add_entry(x, r3, 1.0);
  m.add_entry(y, r3, 1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(2.0));
}

TEST_CASE("unbounded when nothing blocks") {
  SimplexModel m;
  m.add_var(1.0);
  CHECK(m.optimize() == Status::kUnbounded);
}

TEST_CASE("infeasible via negative right-hand side") {
  SimplexModel m;
  int x = m.add_var(1.0);
  int r = m.add_row(-1.0);  // x <= -1 with x >= 0
  m.add_entry(x, r, 1.0);
  CHECK(m.optimize() == Status::kInfeasible);
}

TEST_CASE("rows appended after a solve, violated at the incumbent") {
  SimplexModel m;
  int x = m.add_var(1.0);
  int r1 = m.add_row(5.0);
  m.add_entry(x, r1, 1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(5.0));

  int r2 = m.add_row(3.0);  // x <= 3 cuts off the incumbent x = 5
  m.add_entry(x, r2, 1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(3.0));
  CHECK(m.var_value(x) == doctest::Approx(3.0));
}

TEST_CASE("objective swap reuses the basis") {
  SimplexModel m;
  int x = m.add_var(1.0);
  int y = m.add_var(0.0);
  int r = m.add_row(1.0);
  m.add_entry(x, r, 1.0);
  m.add_entry(y, r, 1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.var_value(x) == doctest::Approx(1.0));

  m.set_objective_coeff(x, 0.0);
  m.set_objective_coeff(y, 2.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(2.0));
  CHECK(m.var_value(y) == doctest::Approx(1.0));
}

TEST_CASE("three-stage growth mirrors the cascade pattern") {
  // Stage 1: max t  s.t. t - x <= 0, x <= 2.
  SimplexModel m;
  int t = m.add_var(1.0);
  int w = m.add_var(0.0);
  int x = m.add_var(0.0);
  int rx = m.add_row(2.0);
  m.add_entry(x, rx, 1.0);
  int rc = m.add_row(0.0);
  m.add_entry(t, rc, 1.0);
  m.add_entry(x, rc, -1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(2.0));

  // Stage 2: max w  s.t. w <= x, t >= 2(1-eps).
  m.set_objective_coeff(t, 0.0);
  m.set_objective_coeff(w, 1.0);
  int rt = m.add_row(-2.0 * (1.0 - 1e-6));
  m.add_entry(t, rt, -1.0);
  int rw = m.add_row(0.0);
  m.add_entry(w, rw, 1.0);
  m.add_entry(x, rw, -1.0);
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(2.0));

  // Stage 3: max x with a cap below the incumbent, forcing a phase-1 fix.
  m.set_objective_coeff(w, 0.0);
  m.set_objective_coeff(x, 1.0);
  int cap = m.add_row(1.0);
  m.add_entry(x, cap, 1.0);
  // t <= x and t >= 2(1-eps) now conflict with x <= 1: infeasible.
  CHECK(m.optimize() == Status::kInfeasible);
}

TEST_CASE("text round trip") {
  SimplexModel m;
  int x = m.add_var(3.0);
  int y = m.add_var(2.5);
  int r1 = m.add_row(4.0);
  m.add_entry(x, r1, 1.0);
  m.add_entry(y, r1, 2.0);
  std::string text = m.to_text();

  SimplexModel p = SimplexModel::from_text(text);
  CHECK(p.to_text() == text);
  REQUIRE(m.optimize() == Status::kOptimal);
  REQUIRE(p.optimize() == Status::kOptimal);
  CHECK(p.objective() == doctest::Approx(m.objective()));
}

TEST_CASE("larger dense instance stays consistent under refactorization") {
  // max sum x_i  s.t.  x_i + x_{i+1} <= 1 in a ring of 31; optimum 15.5.
  SimplexModel m;
  const int n = 31;
  std::vector<int> xs;
  for (int i = 0; i < n; ++i) xs.push_back(m.add_var(1.0));
  for (int i = 0; i < n; ++i) {
    int r = m.add_row(1.0);
    m.add_entry(xs[i], r, 1.0);
    m.add_entry(xs[(i + 1) % n], r, 1.0);
  }
  REQUIRE(m.optimize() == Status::kOptimal);
  CHECK(m.objective() == doctest::Approx(15.5));
}
