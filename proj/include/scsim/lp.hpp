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

#ifndef SCSIM_LP_HPP_
#define SCSIM_LP_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace scsim::lp {

enum class Status {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterLimit,
  kNumeric,
};

const char* status_name(Status s);

// Incremental revised-simplex solver for maximization problems of the form
//
//   max  c^T x   s.t.  A x <= b,  x >= 0.
//
// The model is built once and then grown: after an optimize() call more rows
// (and entries of existing variables into those rows) may be appended and the
// objective may be swapped, after which optimize() resumes from the previous
// basis. Appended rows that the current point satisfies enter the basis on
// their slack; rows the current point violates receive an artificial variable
// and a phase-1 pass eliminates them before the main objective is optimized.
//
// B^-1 is kept as a dense column-major matrix; pivots are rank-1 updates
// through the runtime-dispatched axpy/dot kernels, with periodic
// refactorization to bound drift.
class SimplexModel {
 public:
  // Adds a variable (x >= 0) with the given objective coefficient and
  // returns its id.
  int add_var(double obj_coeff);

  // Adds coefficient `coeff` for `var` in row `row`. Rows and variables may
  // be created in any order, but a (var, row) pair must be fully entered
  // before the optimize() call that first covers both.
  void add_entry(int var, int row, double coeff);

  // Adds the row  (entries) <= rhs_upper  and returns its index.
  int add_row(double rhs_upper);

  void set_objective_coeff(int var, double obj_coeff);

  Status optimize();

  double objective() const { return z_; }
  double var_value(int var) const;
  int num_vars() const { return nv_; }
  int num_rows() const { return static_cast<int>(rhs_.size()); }
  long iterations() const { return total_iters_; }

  // Deterministic plain-text round trip of the model (structure and data,
  // not solver state).
  std::string to_text() const;
  static SimplexModel from_text(const std::string& text);

 private:
  struct Entry {
    int row;
    double coeff;
  };

  // Basis ids: var ids are >= 0; slack of row r is -(2r+1); artificial of
  // row r is -(2r+2).
  static int slack_id(int r) { return -(2 * r + 1); }
  static int art_id(int r) { return -(2 * r + 2); }
  static bool is_slack(int id) { return id < 0 && (-id) % 2 == 1; }
  static bool is_art(int id) { return id < 0 && (-id) % 2 == 0; }
  static int id_row(int id) { return (-id - 1) / 2; }

  double obj_of(int id, bool phase1) const;
  void column_of(int id, std::vector<double>& out) const;
  double reduced_cost(int id, const std::vector<double>& y, bool phase1) const;
  void compute_y(bool phase1, std::vector<double>& y) const;
  double current_objective(bool phase1) const;
  void extend_factorization();
  bool refactorize();
  Status run_simplex(bool phase1);

  int nv_ = 0;
  std::vector<double> obj_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<double> rhs_;

  int m_fact_ = 0;  // rows covered by the current factorization
  std::vector<int> basis_;
  std::vector<int> var_basic_row_;  // var id -> basis row, -1 if nonbasic
  std::vector<double> binv_;        // m x m, column-major
  std::vector<double> xb_;
  double z_ = 0.0;
  bool any_artificial_ = false;
  long total_iters_ = 0;
  long pivots_since_refactor_ = 0;

  std::vector<double> scratch_d_;
  std::vector<double> scratch_y_;
  std::vector<char> slack_flags_;
};

}  // namespace scsim::lp

#endif  // SCSIM_LP_HPP_
