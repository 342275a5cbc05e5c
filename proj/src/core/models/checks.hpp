#pragma once

#include "core/models/family.hpp"
#include "core/moduli/report.hpp"

namespace semiflow {

// Semigroup-law residual: sup over the sample points of
// ||F_{s+t}(x) - F_s(F_t(x))|| in the domain norm, with the witness point.
ModulusReport compose_residual(const SemigroupFamily& fam, double s, double t,
                               const SampleSet& sample);

struct FrechetResult {
  Mat op;
  bool analytic = false;
  double step = 0.0;
  // Richardson residual of the central difference, O(step^2); 0 when analytic.
  double truncation_estimate = 0.0;
};

// Space derivative F_t'(x): the family's analytic derivative when present
// (and use_analytic), otherwise central differences with the given step.
// Errors: MarginViolation when the boundary is closer than the step.
FrechetResult frechet_derivative(const SemigroupFamily& fam, double t,
                                 const Vec& x, double step,
                                 bool use_analytic = true);

}  // namespace semiflow
