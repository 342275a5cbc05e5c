#include "core/models/checks.hpp"

#include <cmath>

#include "core/support/error.hpp"

namespace semiflow {

ModulusReport compose_residual(const SemigroupFamily& fam, double s, double t,
                               const SampleSet& sample) {
  require(s >= 0.0 && t >= 0.0, ErrorCode::BadParameter,
          "law residual needs nonnegative times");
  require(!sample.points.empty(), ErrorCode::EmptySample,
          "law residual needs sample points");
  ModulusReport rep;
  rep.estimator_kind = "sampled_lower_bound";
  rep.sample_descriptor = sample.descriptor;
  double worst = -1.0;
  ModulusWitness wit;
  for (const Vec& x : sample.points) {
    Vec joint = evaluate(fam, s + t, x);
    Vec split = evaluate(fam, s, evaluate(fam, t, x));
    double r = vec_dist(joint, split, fam.domain.norm);
    if (r > worst) {
      worst = r;
      wit.x = x;
      wit.value = r;
    }
  }
  rep.t_grid = {s + t};
  rep.values = {worst};
  rep.witnesses = {wit};
  return rep;
}

namespace {

Mat central_difference(const SemigroupFamily& fam, double t, const Vec& x,
                       double step) {
  int n = fam.domain.dim;
  Mat J(n, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    Vec fp = evaluate(fam, t, xp);
    Vec fm = evaluate(fam, t, xm);
    for (int i = 0; i < n; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * step);
  }
  return J;
}

}  // namespace

FrechetResult frechet_derivative(const SemigroupFamily& fam, double t,
                                 const Vec& x, double step,
                                 bool use_analytic) {
  require(t >= 0.0, ErrorCode::BadParameter, "family time must be nonnegative");
  FrechetResult out;
  out.step = step;
  if (use_analytic && fam.has_derivative()) {
    require(domain_contains(fam.domain, x), ErrorCode::OutsideDomain,
            "derivative point outside the domain");
    out.op = fam.deriv_fn(t, x);
    out.analytic = true;
    return out;
  }
  require(step > 0.0, ErrorCode::BadParameter, "difference step must be positive");
  require(dist_to_boundary(fam.domain, x) > step, ErrorCode::MarginViolation,
          "boundary is closer than the difference step");
  out.op = central_difference(fam, t, x, step);
  Mat half = central_difference(fam, t, x, step / 2.0);
  out.truncation_estimate =
      (4.0 / 3.0) * operator_norm(mat_sub(out.op, half), fam.domain.norm);
  return out;
}

}  // namespace semiflow
