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

#include "scsim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "scsim/kernels.hpp"

namespace scsim::lp {
namespace {

constexpr double kTolRc = 1e-9;    // reduced-cost optimality
constexpr double kTolPiv = 1e-9;   // ratio-test blocking threshold
constexpr double kTolFeas = 1e-7;  // feasibility / phase-1 acceptance
constexpr long kRefactorEvery = 256;

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterLimit: return "iteration-limit";
    case Status::kNumeric: return "numeric-failure";
  }
  return "?";
}

int SimplexModel::add_var(double obj_coeff) {
  obj_.push_back(obj_coeff);
  cols_.emplace_back();
  var_basic_row_.push_back(-1);
  return nv_++;
}

void SimplexModel::add_entry(int var, int row, double coeff) {
  if (coeff == 0.0) return;
  cols_[var].push_back({row, coeff});
}

int SimplexModel::add_row(double rhs_upper) {
  rhs_.push_back(rhs_upper);
  return static_cast<int>(rhs_.size()) - 1;
}

void SimplexModel::set_objective_coeff(int var, double obj_coeff) {
  obj_[var] = obj_coeff;
}

double SimplexModel::obj_of(int id, bool phase1) const {
  if (id >= 0) return phase1 ? 0.0 : obj_[id];
  if (is_art(id)) return phase1 ? -1.0 : 0.0;
  return 0.0;  // slack
}

double SimplexModel::var_value(int var) const {
  int r = var_basic_row_[var];
  return r >= 0 ? xb_[r] : 0.0;
}

void SimplexModel::column_of(int id, std::vector<double>& out) const {
  const std::size_t m = static_cast<std::size_t>(m_fact_);
  out.assign(m, 0.0);
  const auto& k = kernels::ops();
  if (id >= 0) {
    for (const Entry& e : cols_[id])
      k.axpy(out.data(), binv_.data() + static_cast<std::size_t>(e.row) * m,
             e.coeff, m);
  } else {
    int r = id_row(id);
    double sign = is_art(id) ? -1.0 : 1.0;
    k.axpy(out.data(), binv_.data() + static_cast<std::size_t>(r) * m, sign,
           m);
  }
}

double SimplexModel::reduced_cost(int id, const std::vector<double>& y,
                                  bool phase1) const {
  double rc = obj_of(id, phase1);
  if (id >= 0) {
    for (const Entry& e : cols_[id]) rc -= y[e.row] * e.coeff;
  } else {
    rc -= (is_art(id) ? -1.0 : 1.0) * y[id_row(id)];
  }
  return rc;
}

void SimplexModel::compute_y(bool phase1, std::vector<double>& y) const {
  const std::size_t m = static_cast<std::size_t>(m_fact_);
  y.assign(m, 0.0);
  std::vector<double> cb(m);
  bool any = false;
  for (std::size_t i = 0; i < m; ++i) {
    cb[i] = obj_of(basis_[i], phase1);
    any = any || cb[i] != 0.0;
  }
  if (!any) return;
  const auto& k = kernels::ops();
  for (std::size_t c = 0; c < m; ++c)
    y[c] = k.dot(cb.data(), binv_.data() + c * m, m);
}

double SimplexModel::current_objective(bool phase1) const {
  double z = 0.0;
  for (int i = 0; i < m_fact_; ++i) z += obj_of(basis_[i], phase1) * xb_[i];
  return z;
}

void SimplexModel::extend_factorization() {
  const int m_old = m_fact_;
  const int m_new = static_cast<int>(rhs_.size());
  if (m_new == m_old) return;

  // Row views of the appended rows.
  std::vector<std::vector<Entry>> rows(m_new - m_old);
  for (int v = 0; v < nv_; ++v)
    for (const Entry& e : cols_[v])
      if (e.row >= m_old) rows[e.row - m_old].push_back({v, e.coeff});

  std::vector<double> resid(m_new - m_old);
  for (int r = 0; r < m_new - m_old; ++r) {
    double act = 0.0;
    for (const Entry& e : rows[r]) act += e.coeff * var_value(e.row);
    resid[r] = rhs_[m_old + r] - act;
  }

  // Basis ids and signs for the new rows: a satisfied row enters on its
  // slack, a violated one on a fresh artificial.
  std::vector<double> dsign(m_new - m_old);
  for (int r = 0; r < m_new - m_old; ++r) {
    if (resid[r] >= -kTolFeas) {
      basis_.push_back(slack_id(m_old + r));
      xb_.push_back(std::max(resid[r], 0.0));
      dsign[r] = 1.0;
    } else {
      basis_.push_back(art_id(m_old + r));
      xb_.push_back(-resid[r]);
      dsign[r] = -1.0;
      any_artificial_ = true;
    }
  }

  // A21[r][k]: coefficient in new row r of the basic variable of old row k.
  // B_new = [[B, 0], [A21, D]]  =>  B_new^-1 = [[B^-1, 0], [-D A21 B^-1, D]].
  std::vector<double> next(static_cast<std::size_t>(m_new) * m_new, 0.0);
  for (int c = 0; c < m_old; ++c) {
    const double* src = binv_.data() + static_cast<std::size_t>(c) * m_old;
    double* dst = next.data() + static_cast<std::size_t>(c) * m_new;
    std::copy(src, src + m_old, dst);
    for (int r = 0; r < m_new - m_old; ++r) {
      double s = 0.0;
      for (const Entry& e : rows[r]) {
        int k = var_basic_row_[e.row];  // Entry.row holds the var id here
        if (k >= 0 && k < m_old) s += e.coeff * src[k];
      }
      dst[m_old + r] = -dsign[r] * s;
    }
  }
  for (int r = 0; r < m_new - m_old; ++r)
    next[static_cast<std::size_t>(m_old + r) * m_new + (m_old + r)] = dsign[r];

  binv_ = std::move(next);
  m_fact_ = m_new;
}

bool SimplexModel::refactorize() {
  const std::size_t m = static_cast<std::size_t>(m_fact_);
  // Assemble basis columns, column-major, augmented with the identity.
  std::vector<double> a(m * m, 0.0), inv(m * m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    int id = basis_[c];
    double* col = a.data() + c * m;
    if (id >= 0) {
      for (const Entry& e : cols_[id]) col[e.row] = e.coeff;
    } else {
      col[id_row(id)] = is_art(id) ? -1.0 : 1.0;
    }
    inv[c * m + c] = 1.0;
  }
  // Gauss-Jordan with partial pivoting on the row dimension.
  std::vector<int> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = static_cast<int>(i);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * m + k]);
    for (std::size_t i = k + 1; i < m; ++i) {
      double v = std::abs(a[k * m + i]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-12) return false;
    if (piv != k) {
      for (std::size_t c = 0; c < m; ++c) {
        std::swap(a[c * m + k], a[c * m + piv]);
        std::swap(inv[c * m + k], inv[c * m + piv]);
      }
    }
    double d = 1.0 / a[k * m + k];
    for (std::size_t c = 0; c < m; ++c) {
      a[c * m + k] *= d;
      inv[c * m + k] *= d;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      double f = a[k * m + i];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) {
        a[c * m + i] -= f * a[c * m + k];
        inv[c * m + i] -= f * inv[c * m + k];
      }
    }
  }
  binv_ = std::move(inv);
  // xb = B^-1 b
  xb_.assign(m, 0.0);
  const auto& kr = kernels::ops();
  for (std::size_t c = 0; c < m; ++c)
    if (rhs_[c] != 0.0) kr.axpy(xb_.data(), binv_.data() + c * m, rhs_[c], m);
  for (std::size_t i = 0; i < m; ++i) {
    if (xb_[i] < 0.0 && xb_[i] > -kTolFeas) xb_[i] = 0.0;
  }
  pivots_since_refactor_ = 0;
  return true;
}

Status SimplexModel::run_simplex(bool phase1) {
  const std::size_t m = static_cast<std::size_t>(m_fact_);
  const long max_iters = 2000 + 50L * (m_fact_ + nv_);
  long stalled = 0;
  bool bland = false;

  auto order_key = [&](int id) {
    return id >= 0 ? static_cast<long>(id)
                   : static_cast<long>(nv_) + id_row(id);
  };

  for (long iter = 0; iter < max_iters; ++iter) {
    compute_y(phase1, scratch_y_);

    // Pricing: structural variables first, then slacks. Artificials never
    // re-enter.
    int enter = 0;
    bool have = false;
    double best_rc = kTolRc;
    long best_key = 0;
    auto consider = [&](int id) {
      double rc = reduced_cost(id, scratch_y_, phase1);
      if (rc <= kTolRc) return;
      if (!bland) {
        if (rc > best_rc) {
          best_rc = rc;
          enter = id;
          have = true;
        }
      } else {
        long key = order_key(id);
        if (!have || key < best_key) {
          best_key = key;
          enter = id;
          have = true;
        }
      }
    };
    for (int v = 0; v < nv_; ++v)
      if (var_basic_row_[v] < 0) consider(v);
    slack_flags_.assign(m_fact_, false);
    for (int i = 0; i < m_fact_; ++i)
      if (is_slack(basis_[i])) slack_flags_[id_row(basis_[i])] = true;
    for (int r = 0; r < m_fact_; ++r)
      if (!slack_flags_[r]) consider(slack_id(r));
    if (!have) return Status::kOptimal;

    column_of(enter, scratch_d_);

    // Ratio test. In phase 2 any surviving artificial sits at zero and must
    // not move, so a nonzero pivot in its row forces a degenerate leave; in
    // phase 1 artificials are ordinary basic variables being driven down.
    int leave = -1;
    double t = 0.0;
    bool art_leave = false;
    double best_piv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double di = scratch_d_[i];
      if (!phase1 && is_art(basis_[i]) && std::abs(di) > kTolPiv) {
        if (!art_leave || std::abs(di) > best_piv) {
          art_leave = true;
          leave = static_cast<int>(i);
          best_piv = std::abs(di);
          t = 0.0;
        }
        continue;
      }
      if (art_leave) continue;
      if (di > kTolPiv) {
        double ratio = std::max(xb_[i], 0.0) / di;
        if (leave < 0 || ratio < t - 1e-12 ||
            (ratio <= t + 1e-12 && di > best_piv)) {
          leave = static_cast<int>(i);
          t = ratio;
          best_piv = di;
        }
      }
    }
    if (leave < 0) return phase1 ? Status::kNumeric : Status::kUnbounded;

    // Pivot: rank-1 update of B^-1, column-major.
    double piv = scratch_d_[leave];
    const auto& k = kernels::ops();
    for (std::size_t c = 0; c < m; ++c) {
      double* col = binv_.data() + c * m;
      double vr = col[leave];
      if (vr == 0.0) continue;
      double g = vr / piv;
      k.axpy(col, scratch_d_.data(), -g, m);
      col[leave] = g;
    }
    double step = art_leave ? 0.0 : xb_[leave] / piv;
    k.axpy(xb_.data(), scratch_d_.data(), -step, m);
    xb_[leave] = step;
    for (std::size_t i = 0; i < m; ++i)
      if (xb_[i] < 0.0 && xb_[i] > -kTolFeas) xb_[i] = 0.0;

    int old_id = basis_[leave];
    if (old_id >= 0) var_basic_row_[old_id] = -1;
    if (enter >= 0) var_basic_row_[enter] = leave;
    basis_[leave] = enter;

    ++total_iters_;
    if (++pivots_since_refactor_ >= kRefactorEvery) {
      if (!refactorize()) return Status::kNumeric;
    }

    if (step <= 1e-12) {
      if (++stalled > 2 * m_fact_ + 50) bland = true;
    } else {
      stalled = 0;
      bland = false;
    }
  }
  return Status::kIterLimit;
}

Status SimplexModel::optimize() {
  if (m_fact_ == 0 && !rhs_.empty() && basis_.empty()) {
    // First call: all-slack start. Requires b >= 0 row-wise or artificials.
    m_fact_ = static_cast<int>(rhs_.size());
    const std::size_t m = static_cast<std::size_t>(m_fact_);
    binv_.assign(m * m, 0.0);
    basis_.resize(m);
    xb_.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
      binv_[r * m + r] = 1.0;
      if (rhs_[r] >= -kTolFeas) {
        basis_[r] = slack_id(static_cast<int>(r));
        xb_[r] = std::max(rhs_[r], 0.0);
      } else {
        // flip to artificial: column -e_r, value -b
        binv_[r * m + r] = -1.0;
        basis_[r] = art_id(static_cast<int>(r));
        xb_[r] = -rhs_[r];
        any_artificial_ = true;
      }
    }
  } else if (static_cast<int>(rhs_.size()) > m_fact_) {
    extend_factorization();
  }

  if (any_artificial_) {
    Status s1 = run_simplex(true);
    if (s1 != Status::kOptimal) return s1;
    double art_sum = 0.0;
    for (int i = 0; i < m_fact_; ++i)
      if (is_art(basis_[i])) art_sum += xb_[i];
    if (art_sum > kTolFeas) return Status::kInfeasible;
    any_artificial_ = false;
  }

  Status s = run_simplex(false);
  z_ = current_objective(false);
  return s;
}

std::string SimplexModel::to_text() const {
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "lp 1\n";
  os << "vars " << nv_ << "\n";
  os << "rows " << rhs_.size() << "\n";
  os << "obj";
  for (int v = 0; v < nv_; ++v) os << " " << fmt(obj_[v]);
  os << "\nrhs";
  for (double b : rhs_) os << " " << fmt(b);
  os << "\n";
  for (int v = 0; v < nv_; ++v) {
    os << "col " << v << " " << cols_[v].size();
    for (const Entry& e : cols_[v]) os << " " << e.row << " " << fmt(e.coeff);
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

SimplexModel SimplexModel::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  SimplexModel mdl;
  is >> tok;
  if (tok != "lp") throw std::runtime_error("lp text: bad magic");
  int version, nv, nr;
  is >> version;
  is >> tok >> nv;
  is >> tok >> nr;
  is >> tok;  // "obj"
  std::vector<double> obj(nv);
  for (auto& v : obj) is >> v;
  is >> tok;  // "rhs"
  std::vector<double> rhs(nr);
  for (auto& v : rhs) is >> v;
  for (int r = 0; r < nr; ++r) mdl.add_row(rhs[r]);
  for (int v = 0; v < nv; ++v) mdl.add_var(obj[v]);
  while (is >> tok && tok == "col") {
    int v, cnt;
    is >> v >> cnt;
    for (int i = 0; i < cnt; ++i) {
      int r;
      double a;
      is >> r >> a;
      mdl.add_entry(v, r, a);
    }
  }
  return mdl;
}

}  // namespace scsim::lp
