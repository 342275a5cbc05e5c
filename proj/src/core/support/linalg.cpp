#include "core/support/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/support/error.hpp"

namespace semiflow {

const char* norm_kind_name(NormKind k) {
  return k == NormKind::Euclidean ? "euclidean" : "sup";
}

NormKind norm_kind_from_name(const std::string& name) {
  if (name == "euclidean" || name == "l2") return NormKind::Euclidean;
  if (name == "sup" || name == "linf" || name == "sup-norm") return NormKind::Sup;
  fail(ErrorCode::ConfigError, "unknown norm kind '" + name + "'");
}

double norm_euclidean(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_sup(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

double norm_l1(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double dual_norm(const Vec& a, NormKind k) {
  return k == NormKind::Euclidean ? norm_euclidean(a) : norm_l1(a);
}

double vec_norm(const Vec& v, NormKind k) {
  return k == NormKind::Euclidean ? norm_euclidean(v) : norm_sup(v);
}

double vec_dist(const Vec& a, const Vec& b, NormKind k) {
  require(a.size() == b.size(), ErrorCode::BadParameter, "dimension mismatch");
  if (k == NormKind::Euclidean) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
      double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
  return s;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vec_scale(const Vec& a, double s) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

double vec_dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec vec_lerp(const Vec& a, const Vec& b, double t) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat mat_add(const Mat& x, const Mat& y) {
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Mat mat_scale(const Mat& x, double s) {
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] * s;
  return r;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  require(x.cols == y.rows, ErrorCode::BadParameter, "matrix shape mismatch");
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  require(m.cols == static_cast<int>(v.size()), ErrorCode::BadParameter,
          "matrix/vector shape mismatch");
  Vec r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double mat_one_norm(const Mat& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

double mat_inf_norm(const Mat& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

Mat mat_solve(Mat m, Mat b) {
  require(m.rows == m.cols && m.rows == b.rows, ErrorCode::BadParameter,
          "mat_solve shape mismatch");
  int n = m.rows;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(m(i, col)) > std::fabs(m(piv, col))) piv = i;
    require(std::fabs(m(piv, col)) > 1e-300, ErrorCode::Internal, "singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      for (int j = 0; j < b.cols; ++j) std::swap(b(piv, j), b(col, j));
    }
    double d = m(col, col);
    for (int i = col + 1; i < n; ++i) {
      double factor = m(i, col) / d;
      if (factor == 0.0) continue;
      for (int j = col; j < n; ++j) m(i, j) -= factor * m(col, j);
      for (int j = 0; j < b.cols; ++j) b(i, j) -= factor * b(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    for (int j = 0; j < b.cols; ++j) {
      double s = b(col, j);
      for (int k = col + 1; k < n; ++k) s -= m(col, k) * b(k, j);
      b(col, j) = s / m(col, col);
    }
  }
  return b;
}

namespace {

double spectral_norm_2x2(const Mat& m) {
  // sigma_max^2 is the larger root of x^2 - |M|_F^2 x + det^2.
  double f = m(0, 0) * m(0, 0) + m(0, 1) * m(0, 1) + m(1, 0) * m(1, 0) + m(1, 1) * m(1, 1);
  double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double disc = std::max(0.0, f * f - 4.0 * det * det);
  return std::sqrt((f + std::sqrt(disc)) / 2.0);
}

double spectral_norm_power(const Mat& m) {
  int n = m.cols;
  Mat mt(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) mt(j, i) = m(i, j);
  Mat b = mat_mul(mt, m);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + i);
  double nv = norm_euclidean(v);
  for (double& x : v) x /= nv;
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vec w = mat_vec(b, v);
    double nw = norm_euclidean(w);
    if (nw == 0.0) return 0.0;
    lambda = vec_dot(v, w);
    for (size_t i = 0; i < w.size(); ++i) w[i] /= nw;
    Vec resid = vec_sub(mat_vec(b, w), vec_scale(w, nw));
    v = w;
    if (norm_euclidean(resid) <= 1e-10 * std::max(1.0, nw)) {
      lambda = nw;
      break;
    }
    lambda = nw;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

double operator_norm(const Mat& m, NormKind k) {
  if (k == NormKind::Sup) return mat_inf_norm(m);
  if (m.rows == 1 && m.cols == 1) return std::fabs(m(0, 0));
  if (m.rows == 2 && m.cols == 2) return spectral_norm_2x2(m);
  return spectral_norm_power(m);
}

}  // namespace semiflow
