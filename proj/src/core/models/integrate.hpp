#pragma once

#include <functional>

#include "core/support/linalg.hpp"

namespace semiflow {

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 2000000;
};

// Integrates y' = f(y) from y0 over [0, t_span] with an embedded 5(4)
// Dormand-Prince pair. `inside` is checked after every accepted step;
// a false result raises TrajectoryEscape carrying the step's end time.
// Step-size underflow or step-budget exhaustion raises StiffnessFailure.
Vec integrate_ode(const std::function<Vec(const Vec&)>& f, Vec y0,
                  double t_span, const IntegratorConfig& cfg,
                  const std::function<bool(const Vec&)>& inside);

}  // namespace semiflow
