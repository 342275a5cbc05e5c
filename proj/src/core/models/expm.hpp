#pragma once

#include "core/support/linalg.hpp"

namespace semiflow {

// exp(A) - I computed without subtracting: Taylor sum of the scaled matrix
// followed by the doubling identity E(2X) = E(X)^2 + 2 E(X). Accurate for
// small ||A|| where exp(A) - I would cancel.
Mat expm1m(const Mat& A);

Mat expm(const Mat& A);

}  // namespace semiflow
