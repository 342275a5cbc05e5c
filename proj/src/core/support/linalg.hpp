#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace semiflow {

using Vec = std::vector<double>;

enum class NormKind { Euclidean, Sup };

const char* norm_kind_name(NormKind k);
NormKind norm_kind_from_name(const std::string& name);

double norm_euclidean(const Vec& v);
double norm_sup(const Vec& v);
double norm_l1(const Vec& v);

// Norm of a as a linear functional x -> a.x under the given vector norm.
// Euclidean is self-dual; the sup norm pairs with l1.
double dual_norm(const Vec& a, NormKind k);
double vec_norm(const Vec& v, NormKind k);
double vec_dist(const Vec& a, const Vec& b, NormKind k);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Vec& a, double s);
double vec_dot(const Vec& a, const Vec& b);
Vec vec_lerp(const Vec& a, const Vec& b, double t);

/// Dense row-major matrix, sized for ambient dimensions of at most a few
/// dozen; everything here is O(n^3) with no blocking.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  static Mat identity(int n);
};

Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, double s);
Mat mat_mul(const Mat& x, const Mat& y);
Vec mat_vec(const Mat& m, const Vec& v);
double mat_one_norm(const Mat& m);      // max abs column sum
double mat_inf_norm(const Mat& m);      // max abs row sum

/// Solves M X = B by Gaussian elimination with partial pivoting.
Mat mat_solve(Mat m, Mat b);

/// Operator norm induced by the given vector norm. Exact for the sup norm
/// (row sums) and for Euclidean in 1 or 2 dimensions; power iteration on
/// M^T M (residual 1e-10) otherwise.
double operator_norm(const Mat& m, NormKind k);

}  // namespace semiflow
