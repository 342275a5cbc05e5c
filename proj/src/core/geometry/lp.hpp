#pragma once

#include <vector>

#include "core/support/linalg.hpp"

namespace semiflow {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* lp_status_name(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
};

// Linear program over free (sign-unrestricted) variables:
//   minimize c.x  subject to  rows[i].x <= rhs[i].
// Equalities are encoded as paired inequalities via add_eq.
struct LpProblem {
  int n = 0;
  Vec c;
  std::vector<Vec> rows;
  Vec rhs;

  explicit LpProblem(int nvars) : n(nvars), c(nvars, 0.0) {}

  void add_le(Vec a, double b);
  void add_ge(Vec a, double b);
  void add_eq(Vec a, double b);
};

// Dense two-phase tableau simplex with Bland's rule; terminates on all
// inputs. Free variables are handled by the u-v split, so solutions with
// negative coordinates are fine. Sizes here stay small (tens of variables).
LpResult solve_lp(const LpProblem& p);

}  // namespace semiflow
