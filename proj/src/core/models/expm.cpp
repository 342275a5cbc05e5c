#include "core/models/expm.hpp"

#include <cmath>

#include "core/support/error.hpp"

namespace semiflow {

Mat expm1m(const Mat& A) {
  require(A.rows == A.cols && A.rows > 0, ErrorCode::BadParameter,
          "expm needs a square matrix");
  double norm = mat_inf_norm(A);
  int s = 0;
  if (norm > 0.25) {
    s = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    s = std::min(s, 64);
  }
  Mat B = mat_scale(A, std::ldexp(1.0, -s));

  // E = B + B^2/2! + ... ; terms shrink by at least 1/4 per order
  Mat term = B;
  Mat E = B;
  for (int k = 2; k <= 60; ++k) {
    term = mat_scale(mat_mul(term, B), 1.0 / k);
    E = mat_add(E, term);
    if (mat_inf_norm(term) <= 1e-18 * (mat_inf_norm(E) + 1e-300)) break;
  }
  for (int i = 0; i < s; ++i) E = mat_add(mat_mul(E, E), mat_scale(E, 2.0));
  return E;
}

Mat expm(const Mat& A) {
  return mat_add(Mat::identity(A.rows), expm1m(A));
}

}  // namespace semiflow
