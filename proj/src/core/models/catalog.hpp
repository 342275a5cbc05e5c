#pragma once

#include "core/models/family.hpp"

namespace semiflow {

// Piecewise contraction on (-1,1): plain exponential decay until the
// trajectory reaches |x| = 1/2, quadratic-in-x decay afterwards. Continuous
// and Lipschitz in x, continuous but not differentiable in t along the seam
// t = ln(2|x|). Ties on the seam resolve to the first branch (the formulas
// agree there).
SemigroupFamily piecewise_decay_family();

// F_t = exp(tA) on the given domain; analytic derivative and a
// cancellation-free centered difference are supplied.
SemigroupFamily linear_family(Mat A, Domain domain);

// Rigid rotation with angular speed omega on the euclidean ball; an
// isometry, so never escapes.
SemigroupFamily rotation2d_family(double omega, double radius);

// Flow of x' = -x^3 on (-1,1) in closed form: x / sqrt(1 + 2 t x^2).
SemigroupFamily cubic_decay_family();

// Numerical flow of an arbitrary field; derivative available when the field
// carries a jacobian (integrated variational equation).
SemigroupFamily flow_family(VectorField field, Domain domain,
                            IntegratorConfig cfg = {});

// F_t(x) = x + t^2: not a semigroup. Fixture for detecting law violations.
SemigroupFamily broken_shift_family();

}  // namespace semiflow
