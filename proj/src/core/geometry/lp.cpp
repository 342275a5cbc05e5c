#include "core/geometry/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/support/error.hpp"

namespace semiflow {

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

void LpProblem::add_le(Vec a, double b) {
  require(static_cast<int>(a.size()) == n, ErrorCode::BadParameter, "lp row size");
  rows.push_back(std::move(a));
  rhs.push_back(b);
}

void LpProblem::add_ge(Vec a, double b) {
  for (double& v : a) v = -v;
  add_le(std::move(a), -b);
}

void LpProblem::add_eq(Vec a, double b) {
  add_le(a, b);
  add_ge(std::move(a), b);
}

namespace {

constexpr double kPivTol = 1e-9;
constexpr double kFeasTol = 1e-7;

class Tableau {
 public:
  Tableau(const LpProblem& p) : n_(p.n), m_(static_cast<int>(p.rows.size())) {
    nsplit_ = 2 * n_;
    // Columns: u/v split, then one slack per row, then artificials as needed.
    ncols_ = nsplit_ + m_;
    std::vector<int> art_rows;
    for (int i = 0; i < m_; ++i)
      if (p.rhs[i] < 0.0) art_rows.push_back(i);
    nart_ = static_cast<int>(art_rows.size());
    int total = ncols_ + nart_;
    t_.assign(static_cast<size_t>(m_) * (total + 1), 0.0);
    stride_ = total + 1;
    basis_.assign(m_, -1);
    usable_.assign(total, true);

    int next_art = ncols_;
    for (int i = 0; i < m_; ++i) {
      double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) {
        at(i, j) = sign * p.rows[i][j];
        at(i, n_ + j) = -sign * p.rows[i][j];
      }
      at(i, nsplit_ + i) = sign;
      at(i, total) = sign * p.rhs[i];
      if (sign < 0.0) {
        at(i, next_art) = 1.0;
        basis_[i] = next_art++;
      } else {
        basis_[i] = nsplit_ + i;
      }
    }
    total_ = total;
  }

  LpStatus run(const Vec& obj_c) {
    // Phase 1: minimize artificial total.
    if (nart_ > 0) {
      Vec c1(total_, 0.0);
      for (int j = ncols_; j < total_; ++j) c1[j] = 1.0;
      price(c1);
      LpStatus s = iterate(c1);
      if (s != LpStatus::Optimal) return LpStatus::Infeasible;
      if (objval_ > kFeasTol) return LpStatus::Infeasible;
      purge_artificials();
      for (int j = ncols_; j < total_; ++j) usable_[j] = false;
    }
    Vec c2(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      c2[j] = obj_c[j];
      c2[n_ + j] = -obj_c[j];
    }
    price(c2);
    return iterate(c2);
  }

  double objval() const { return objval_; }

  Vec primal() const {
    Vec z(total_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0) z[basis_[i]] = at(i, total_);
    Vec x(n_);
    for (int j = 0; j < n_; ++j) x[j] = z[j] - z[n_ + j];
    return x;
  }

 private:
  double& at(int i, int j) { return t_[static_cast<size_t>(i) * stride_ + j]; }
  double at(int i, int j) const { return t_[static_cast<size_t>(i) * stride_ + j]; }

  void price(const Vec& c) {
    cost_ = c;
    objval_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      int b = basis_[i];
      if (b < 0 || c[b] == 0.0) continue;
      double cb = c[b];
      for (int j = 0; j < total_; ++j) cost_[j] -= cb * at(i, j);
      objval_ += cb * at(i, total_);
    }
  }

  LpStatus iterate(const Vec&) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < total_; ++j)
        if (usable_[j] && cost_[j] < -kPivTol) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= kPivTol) continue;
        double ratio = at(i, total_) / a;
        if (ratio < best_ratio - kPivTol ||
            (ratio < best_ratio + kPivTol &&
             (leave < 0 || basis_[i] < basis_[leave]))) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int s) {
    double d = at(r, s);
    for (int j = 0; j <= total_; ++j) at(r, j) /= d;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, s);
      if (f == 0.0) continue;
      for (int j = 0; j <= total_; ++j) at(i, j) -= f * at(r, j);
    }
    double f = cost_[s];
    if (f != 0.0) {
      for (int j = 0; j < total_; ++j) cost_[j] -= f * at(r, j);
      objval_ += f * at(r, total_);
    }
    basis_[r] = s;
  }

  // After phase 1, pivot zero-level artificials out of the basis; a row with
  // no usable pivot is redundant and stays parked at level zero.
  void purge_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < ncols_) continue;
      int enter = -1;
      for (int j = 0; j < ncols_; ++j)
        if (std::fabs(at(i, j)) > kPivTol) {
          enter = j;
          break;
        }
      if (enter >= 0) pivot(i, enter);
    }
  }

  int n_, m_, nsplit_, ncols_, nart_ = 0, total_ = 0, stride_ = 0;
  std::vector<double> t_;
  std::vector<int> basis_;
  std::vector<char> usable_;
  Vec cost_;
  double objval_ = 0.0;
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  require(p.n > 0, ErrorCode::BadParameter, "lp needs at least one variable");
  LpResult r;
  if (p.rows.empty()) {
    bool zero = true;
    for (double v : p.c) zero = zero && v == 0.0;
    r.status = zero ? LpStatus::Optimal : LpStatus::Unbounded;
    r.x.assign(p.n, 0.0);
    return r;
  }
  Tableau tab(p);
  r.status = tab.run(p.c);
  if (r.status == LpStatus::Optimal) {
    r.value = tab.objval();
    r.x = tab.primal();
  }
  return r;
}

}  // namespace semiflow
