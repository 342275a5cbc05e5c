#include "core/models/catalog.hpp"

#include <cmath>
#include <utility>

#include "core/models/expm.hpp"
#include "core/support/error.hpp"

namespace semiflow {

namespace {

double piecewise_eval(double t, double x) {
  double ax = std::abs(x);
  if (ax <= 0.5) return std::exp(-2.0 * t) * x;
  double seam = std::log(2.0 * ax);
  if (t <= seam) return std::exp(-t) * x;
  return 2.0 * std::exp(-2.0 * t) * x * ax;
}

double piecewise_deriv(double t, double x) {
  double ax = std::abs(x);
  if (ax <= 0.5) return std::exp(-2.0 * t);
  double seam = std::log(2.0 * ax);
  if (t <= seam) return std::exp(-t);
  return 4.0 * std::exp(-2.0 * t) * ax;
}

Mat rot(double theta) {
  Mat m(2, 2);
  m(0, 0) = std::cos(theta);
  m(0, 1) = std::sin(theta);
  m(1, 0) = -std::sin(theta);
  m(1, 1) = std::cos(theta);
  return m;
}

}  // namespace

SemigroupFamily piecewise_decay_family() {
  SemigroupFamily fam;
  fam.domain = make_interval(-1.0, 1.0);
  fam.kind = FamilyKind::ClosedForm;
  fam.name = "piecewise_decay";
  fam.eval_fn = [](double t, const Vec& x) { return Vec{piecewise_eval(t, x[0])}; };
  fam.deriv_fn = [](double t, const Vec& x) {
    Mat m(1, 1);
    m(0, 0) = piecewise_deriv(t, x[0]);
    return m;
  };
  return fam;
}

SemigroupFamily linear_family(Mat A, Domain domain) {
  require(A.rows == A.cols && A.rows == domain.dim, ErrorCode::BadParameter,
          "matrix shape must match the ambient dimension");
  SemigroupFamily fam;
  fam.domain = std::move(domain);
  fam.kind = FamilyKind::MatrixExponential;
  fam.name = "linear";
  fam.eval_fn = [A](double t, const Vec& x) {
    return mat_vec(expm(mat_scale(A, t)), x);
  };
  fam.deriv_fn = [A](double t, const Vec&) { return expm(mat_scale(A, t)); };
  fam.centered_tdiff = [A](double t, double h, const Vec& x) {
    // exp((t+h)A) - exp((t-h)A) = exp((t-h)A) (exp(2hA) - I)
    Vec inc = mat_vec(expm1m(mat_scale(A, 2.0 * h)), x);
    return mat_vec(expm(mat_scale(A, t - h)), inc);
  };
  return fam;
}

SemigroupFamily rotation2d_family(double omega, double radius) {
  SemigroupFamily fam;
  fam.domain = make_ball({0.0, 0.0}, radius, NormKind::Euclidean);
  fam.kind = FamilyKind::ClosedForm;
  fam.name = "rotation2d";
  fam.params["omega"] = omega;
  fam.eval_fn = [omega](double t, const Vec& x) {
    return mat_vec(rot(omega * t), x);
  };
  fam.deriv_fn = [omega](double t, const Vec&) { return rot(omega * t); };
  fam.centered_tdiff = [omega](double t, double h, const Vec& x) {
    double s = 2.0 * std::sin(omega * h);
    Vec swirl{s * x[1], -s * x[0]};
    return mat_vec(rot(omega * t), swirl);
  };
  return fam;
}

SemigroupFamily cubic_decay_family() {
  SemigroupFamily fam;
  fam.domain = make_interval(-1.0, 1.0);
  fam.kind = FamilyKind::ClosedForm;
  fam.name = "cubic_decay";
  fam.eval_fn = [](double t, const Vec& x) {
    return Vec{x[0] / std::sqrt(1.0 + 2.0 * t * x[0] * x[0])};
  };
  fam.deriv_fn = [](double t, const Vec& x) {
    Mat m(1, 1);
    m(0, 0) = std::pow(1.0 + 2.0 * t * x[0] * x[0], -1.5);
    return m;
  };
  fam.centered_tdiff = [](double t, double h, const Vec& x) {
    double x2 = x[0] * x[0];
    double ra = std::sqrt(1.0 + 2.0 * (t - h) * x2);
    double rb = std::sqrt(1.0 + 2.0 * (t + h) * x2);
    return Vec{-4.0 * h * x2 * x[0] / (ra * rb * (ra + rb))};
  };
  return fam;
}

SemigroupFamily flow_family(VectorField field, Domain domain,
                            IntegratorConfig cfg) {
  SemigroupFamily fam;
  fam.domain = std::move(domain);
  fam.kind = FamilyKind::FlowGenerated;
  fam.name = field.name.empty() ? "flow" : "flow_" + field.name;
  fam.eval_tolerance = std::max(cfg.abs_tol, cfg.rel_tol);
  Domain dom = fam.domain;  // captured by value for purity
  auto f = field.f;
  fam.eval_fn = [f, dom, cfg](double t, const Vec& x) {
    return integrate_ode(f, x, t, cfg,
                         [&dom](const Vec& y) { return domain_contains(dom, y); });
  };
  if (field.jacobian) {
    auto jac = field.jacobian;
    int n = fam.domain.dim;
    fam.deriv_fn = [f, jac, dom, cfg, n](double t, const Vec& x) {
      // variational system: u' = f(u), J' = Df(u) J, J(0) = I
      Vec z(n + n * n, 0.0);
      for (int i = 0; i < n; ++i) z[i] = x[i];
      for (int i = 0; i < n; ++i) z[n + i * n + i] = 1.0;
      auto rhs = [&](const Vec& w) {
        Vec u(w.begin(), w.begin() + n);
        Mat J(n, n);
        for (int i = 0; i < n * n; ++i) J.a[i] = w[n + i];
        Vec du = f(u);
        Mat dJ = mat_mul(jac(u), J);
        Vec out(n + n * n);
        for (int i = 0; i < n; ++i) out[i] = du[i];
        for (int i = 0; i < n * n; ++i) out[n + i] = dJ.a[i];
        return out;
      };
      auto inside = [&dom, n](const Vec& w) {
        Vec u(w.begin(), w.begin() + n);
        return domain_contains(dom, u);
      };
      Vec z1 = integrate_ode(rhs, std::move(z), t, cfg, inside);
      Mat J(n, n);
      for (int i = 0; i < n * n; ++i) J.a[i] = z1[n + i];
      return J;
    };
  }
  return fam;
}

SemigroupFamily broken_shift_family() {
  SemigroupFamily fam;
  fam.domain = make_interval(-1.0, 1.0);
  fam.kind = FamilyKind::ClosedForm;
  fam.name = "broken_shift";
  fam.eval_fn = [](double t, const Vec& x) { return Vec{x[0] + t * t}; };
  fam.deriv_fn = [](double, const Vec&) {
    Mat m(1, 1);
    m(0, 0) = 1.0;
    return m;
  };
  return fam;
}

}  // namespace semiflow
