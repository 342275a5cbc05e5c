#include "core/generator/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/models/checks.hpp"
#include "core/support/error.hpp"
#include "core/support/numfmt.hpp"

namespace semiflow {

namespace {

std::string fmt_point(const Vec& x) {
  std::string s = "(";
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(x[i]);
  }
  return s + ")";
}

void finalize(InequalityReport& rep) {
  double min_margin = 0.0;
  bool first = true;
  for (InequalityPoint& row : rep.per_point) {
    row.margin = row.rhs - row.lhs;
    if (first || row.margin < min_margin) min_margin = row.margin;
    first = false;
  }
  rep.pass = !first && min_margin >= -rep.tolerance;
}

// Orbit x, phi(x), ..., phi^len(x) with containment per step; an escape is
// a failed standing hypothesis, not a numeric accident.
std::vector<Vec> orbit_or_fail(const MapFn& phi, const Vec& x0, int len,
                               const Domain& d) {
  std::vector<Vec> orb{x0};
  require(domain_contains(d, x0), ErrorCode::HypothesisNotMet,
          "sample point outside the domain, witness x = " + fmt_point(x0));
  for (int k = 1; k <= len; ++k) {
    Vec next = phi(orb.back());
    if (!domain_contains(d, next))
      fail(ErrorCode::HypothesisNotMet,
           "iterates leave the domain at step " + std::to_string(k) +
               ", witness x = " + fmt_point(x0));
    orb.push_back(std::move(next));
  }
  return orb;
}

}  // namespace

Vec difference_quotient(const SemigroupFamily& fam, double t, const Vec& x) {
  require(t > 0.0, ErrorCode::BadParameter,
          "difference quotient needs t > 0");
  return vec_scale(vec_sub(evaluate(fam, t, x), x), 1.0 / t);
}

std::vector<double> generator_schedule(double t_max, double floor) {
  require(t_max > 0.0 && floor > 0.0 && floor <= t_max,
          ErrorCode::BadParameter, "need 0 < floor <= t_max");
  std::vector<double> ts;
  for (double t = t_max; t >= floor; t *= 0.5) ts.push_back(t);
  return ts;
}

InequalityReport verify_lemma_iterates(const MapFn& phi, const Subset& d_hat,
                                       const Domain& d, double mu, int p,
                                       const SampleSet& sample,
                                       double tolerance) {
  require(p >= 1, ErrorCode::BadParameter, "need p >= 1");
  require(mu > 0.0, ErrorCode::BadParameter, "mu must be positive");
  require(mu <= subset_margin(d_hat, d) * (1.0 + 1e-12),
          ErrorCode::MarginViolation, "mu exceeds the margin of d_hat");
  require(!sample.points.empty(), ErrorCode::EmptySample, "no sample points");

  std::vector<std::vector<Vec>> orbits;
  orbits.reserve(sample.points.size());
  for (const Vec& x : sample.points) {
    orbits.push_back(orbit_or_fail(phi, x, p + 1, d));
    double disp = vec_dist(x, orbits.back()[1], d.norm);
    if (disp > mu * (1.0 + 1e-9))
      fail(ErrorCode::HypothesisNotMet,
           "sup ||x - phi(x)|| <= mu fails, witness x = " + fmt_point(x) +
               " with displacement " + fmt_double(disp));
  }

  // ell = largest sampled quotient of phi^k - Id, k = 1..p, over the given
  // pairs plus the orbit pairs (x, phi(x)) the telescope runs along.
  double ell = 0.0;
  for (const auto& orb : orbits) {
    double den = vec_dist(orb[0], orb[1], d.norm);
    if (den == 0.0) continue;  // fixed point, all terms vanish
    for (int k = 1; k <= p; ++k) {
      Vec gx = vec_sub(orb[k], orb[0]);
      Vec gy = vec_sub(orb[k + 1], orb[1]);
      ell = std::max(ell, vec_dist(gx, gy, d.norm) / den);
    }
  }
  for (const auto& [a, b] : sample.pairs) {
    require(subset_contains(d_hat, a, d.norm), ErrorCode::ContractViolation,
            "pair base outside d_hat");
    double den = vec_dist(a, b, d.norm);
    require(den > 0.0, ErrorCode::DegeneratePair, "pair with x == x~");
    require(den <= mu * (1.0 + 1e-9), ErrorCode::ContractViolation,
            "pair displacement exceeds mu");
    std::vector<Vec> oa = orbit_or_fail(phi, a, p, d);
    std::vector<Vec> ob = orbit_or_fail(phi, b, p, d);
    for (int k = 1; k <= p; ++k) {
      Vec gx = vec_sub(oa[k], a);
      Vec gy = vec_sub(ob[k], b);
      ell = std::max(ell, vec_dist(gx, gy, d.norm) / den);
    }
  }

  InequalityReport rep;
  rep.statement_id = "iterate_telescope";
  rep.tolerance = tolerance;
  rep.ell = ell;
  rep.inputs_echo = {{"p", std::to_string(p)},
                     {"mu", fmt_double(mu)},
                     {"ell", fmt_double(ell)},
                     {"tolerance", fmt_double(tolerance)},
                     {"n_points", std::to_string(sample.points.size())},
                     {"n_pairs", std::to_string(sample.pairs.size())},
                     {"seed", std::to_string(sample.descriptor.seed)}};
  for (size_t i = 0; i < orbits.size(); ++i) {
    const auto& orb = orbits[i];
    Vec drift = vec_sub(vec_sub(orb[0], orb[p]),
                        vec_scale(vec_sub(orb[0], orb[1]), double(p)));
    InequalityPoint row;
    row.x = sample.points[i];
    row.lhs = vec_norm(drift, d.norm);
    row.rhs = (p - 1) * ell * vec_dist(orb[0], orb[1], d.norm);
    rep.per_point.push_back(std::move(row));
  }
  finalize(rep);
  return rep;
}

InequalityReport verify_corollary_quotients(const SemigroupFamily& fam,
                                            double t0, int p,
                                            const Subset& d_hat, double mu,
                                            const SampleSet& sample,
                                            double tolerance) {
  require(t0 > 0.0, ErrorCode::BadParameter, "t0 must be positive");
  require(p >= 1, ErrorCode::BadParameter, "need p >= 1");
  require(mu > 0.0, ErrorCode::BadParameter, "mu must be positive");
  require(mu <= subset_margin(d_hat, fam.domain) * (1.0 + 1e-12),
          ErrorCode::MarginViolation, "mu exceeds the margin of d_hat");
  require(!sample.points.empty(), ErrorCode::EmptySample, "no sample points");
  NormKind norm = fam.domain.norm;

  for (const Vec& x : sample.points) {
    double disp = vec_dist(evaluate(fam, t0, x), x, norm);
    if (disp > mu * (1.0 + 1e-9))
      fail(ErrorCode::HypothesisNotMet,
           "sup ||F_t0 - Id|| <= mu fails, witness x = " + fmt_point(x) +
               " with displacement " + fmt_double(disp));
  }

  // ell over the maps F_{k t0} - Id; the orbit pair of x is (x, F_t0(x)),
  // whose image under F_{k t0} is read off the family at (k+1) t0.
  double ell = 0.0;
  for (const Vec& x : sample.points) {
    Vec x1 = evaluate(fam, t0, x);
    double den = vec_dist(x, x1, norm);
    if (den == 0.0) continue;
    for (int k = 1; k <= p; ++k) {
      Vec gx = vec_sub(evaluate(fam, k * t0, x), x);
      Vec gy = vec_sub(evaluate(fam, (k + 1) * t0, x), x1);
      ell = std::max(ell, vec_dist(gx, gy, norm) / den);
    }
  }
  for (const auto& [a, b] : sample.pairs) {
    require(subset_contains(d_hat, a, norm), ErrorCode::ContractViolation,
            "pair base outside d_hat");
    double den = vec_dist(a, b, norm);
    require(den > 0.0, ErrorCode::DegeneratePair, "pair with x == x~");
    require(den <= mu * (1.0 + 1e-9), ErrorCode::ContractViolation,
            "pair displacement exceeds mu");
    for (int k = 1; k <= p; ++k) {
      Vec gx = vec_sub(evaluate(fam, k * t0, a), a);
      Vec gy = vec_sub(evaluate(fam, k * t0, b), b);
      ell = std::max(ell, vec_dist(gx, gy, norm) / den);
    }
  }

  InequalityReport rep;
  rep.statement_id = "quotient_drift";
  rep.tolerance = tolerance;
  rep.ell = ell;
  rep.inputs_echo = {{"family", fam.name},
                     {"t0", fmt_double(t0)},
                     {"p", std::to_string(p)},
                     {"mu", fmt_double(mu)},
                     {"ell", fmt_double(ell)},
                     {"tolerance", fmt_double(tolerance)},
                     {"seed", std::to_string(sample.descriptor.seed)}};
  for (const Vec& x : sample.points) {
    Vec fp = difference_quotient(fam, p * t0, x);
    Vec f1 = difference_quotient(fam, t0, x);
    InequalityPoint row;
    row.x = x;
    row.t = t0;
    row.lhs = vec_dist(fp, f1, norm);
    row.rhs = (double(p - 1) / p) * ell * vec_norm(f1, norm);
    rep.per_point.push_back(std::move(row));
  }
  finalize(rep);
  return rep;
}

InequalityReport verify_lemma_derivative(const C1Map& phi, const Subset& d_hat,
                                         const Domain& d, double mu,
                                         const SampleSet& sample,
                                         double tolerance, double fd_step) {
  require(mu > 0.0, ErrorCode::BadParameter, "mu must be positive");
  require(mu <= subset_margin(d_hat, d) * (1.0 + 1e-12),
          ErrorCode::MarginViolation, "mu exceeds the margin of d_hat");
  require(!sample.pairs.empty(), ErrorCode::EmptySample, "no pairs given");

  SemigroupFamily wrapped;
  wrapped.domain = d;
  wrapped.kind = FamilyKind::IterateExtended;
  wrapped.name = phi.name;
  wrapped.eval_fn = [f = phi.f](double, const Vec& x) { return f(x); };
  if (phi.jac)
    wrapped.deriv_fn = [j = phi.jac](double, const Vec& x) { return j(x); };

  Subset d_mu = inflate(d_hat, d, mu);
  int dense_n = std::max<int>(201, 2 * sample.descriptor.n_points + 1);
  SampleSet dense = draw_points(d_mu, d, "grid", dense_n,
                                sample.descriptor.seed);
  ModulusReport dmod = derivative_modulus(wrapped, d_mu, {0.0}, dense, fd_step);
  double ell = dmod.values[0];

  MapFn g = [f = phi.f](const Vec& x) { return vec_sub(f(x), x); };
  InequalityReport rep;
  rep.statement_id = "derivative_local_lip";
  rep.tolerance = tolerance;
  rep.ell = ell;
  rep.inputs_echo = {{"map", phi.name},
                     {"mu", fmt_double(mu)},
                     {"ell", fmt_double(ell)},
                     {"derivative", phi.jac ? "analytic" : "central"},
                     {"fd_step", fmt_double(dmod.fd_step)},
                     {"tolerance", fmt_double(tolerance)},
                     {"seed", std::to_string(sample.descriptor.seed)}};
  for (const auto& [a, b] : sample.pairs) {
    require(subset_contains(d_hat, a, d.norm), ErrorCode::ContractViolation,
            "pair base outside d_hat");
    double den = vec_dist(a, b, d.norm);
    require(den > 0.0, ErrorCode::DegeneratePair, "pair with x == x~");
    require(den <= mu * (1.0 + 1e-9), ErrorCode::ContractViolation,
            "pair displacement exceeds mu");
    InequalityPoint row;
    row.x = a;
    row.lhs = vec_dist(g(a), g(b), d.norm) / den;
    row.rhs = ell;
    rep.per_point.push_back(std::move(row));
  }
  // refined scan around the worst pair
  ModulusReport lip = lip_local(g, d_hat, d, mu, sample);
  InequalityPoint row;
  row.x = lip.witnesses[0].x;
  row.lhs = lip.values[0];
  row.rhs = ell;
  rep.per_point.push_back(std::move(row));
  finalize(rep);
  return rep;
}

InequalityReport verify_transfer_estimate(const SemigroupFamily& fam,
                                          const Subset& d1,
                                          const PathCertificate& cert,
                                          double t0,
                                          const std::vector<double>& t_grid,
                                          const SampleSet& sample,
                                          double tolerance) {
  require(!cert.refuted, ErrorCode::Unsupported,
          "no finite path length certificate for this domain");
  require(!sample.points.empty(), ErrorCode::EmptySample, "no sample points");
  NormKind norm = fam.domain.norm;
  const Vec& x1 = sample.points.front();
  require(subset_contains(d1, x1, norm), ErrorCode::ContractViolation,
          "anchor point (first sample point) must lie in d1");
  for (const Vec& x : sample.points)
    require(subset_contains(cert.d2, x, norm), ErrorCode::ContractViolation,
            "sample point outside the certificate set d2");

  double L = cert.length_bound;
  InequalityReport rep;
  rep.statement_id = "continuity_transfer";
  rep.tolerance = tolerance;
  rep.inputs_echo = {{"family", fam.name},
                     {"t0", fmt_double(t0)},
                     {"length_bound", fmt_double(L)},
                     {"tolerance", fmt_double(tolerance)},
                     {"seed", std::to_string(sample.descriptor.seed)}};

  std::vector<Mat> d_at_t0;
  d_at_t0.reserve(sample.points.size());
  for (const Vec& x : sample.points)
    d_at_t0.push_back(frechet_derivative(fam, t0, x, 1e-5).op);
  Vec anchor_t0 = evaluate(fam, t0, x1);

  double worst_eps = 0.0;
  for (double t : t_grid) {
    double eps = vec_dist(evaluate(fam, t, x1), anchor_t0, norm);
    for (size_t i = 0; i < sample.points.size(); ++i) {
      Mat dt = frechet_derivative(fam, t, sample.points[i], 1e-5).op;
      eps = std::max(eps, operator_norm(mat_sub(dt, d_at_t0[i]), norm));
    }
    worst_eps = std::max(worst_eps, eps);
    for (const Vec& x : sample.points) {
      if (!subset_contains(d1, x, norm)) continue;
      InequalityPoint row;
      row.x = x;
      row.t = t;
      row.lhs = vec_dist(evaluate(fam, t, x), evaluate(fam, t0, x), norm);
      row.rhs = (L + 1.0) * eps;
      rep.per_point.push_back(std::move(row));
    }
  }
  require(!rep.per_point.empty(), ErrorCode::EmptySample,
          "no sample points inside d1");
  rep.ell = worst_eps;
  finalize(rep);
  return rep;
}

GeneratorEstimate estimate_generator(const SemigroupFamily& fam,
                                     const Subset& d_hat, double mu,
                                     double epsilon,
                                     const std::vector<double>& t_schedule,
                                     const SampleSet& sample,
                                     double gap_floor) {
  require(mu > 0.0 && mu < 1.0, ErrorCode::BadParameter,
          "mu must lie in (0, 1)");
  require(mu <= subset_margin(d_hat, fam.domain) * (1.0 + 1e-12),
          ErrorCode::MarginViolation, "mu exceeds the margin of d_hat");
  require(epsilon > 0.0, ErrorCode::BadParameter, "epsilon must be positive");
  require(t_schedule.size() >= 2, ErrorCode::BadParameter,
          "schedule needs at least two times");
  for (size_t k = 0; k + 1 < t_schedule.size(); ++k)
    require(t_schedule[k] > t_schedule[k + 1] && t_schedule[k + 1] > 0.0,
            ErrorCode::BadParameter, "schedule must decrease to 0+");
  require(!sample.points.empty() && !sample.pairs.empty(),
          ErrorCode::EmptySample, "need points and pairs");
  NormKind norm = fam.domain.norm;

  Subset d_mu = inflate(d_hat, fam.domain, mu);
  SampleSet pts_mu =
      draw_points(d_mu, fam.domain, "grid",
                  std::max(101, sample.descriptor.n_points),
                  sample.descriptor.seed);
  double min_sep = 1e4 * fam.eval_tolerance;

  double delta1 = 0.0;
  for (double t : t_schedule) {
    double sup_disp = 0.0;
    for (const Vec& x : pts_mu.points)
      sup_disp = std::max(sup_disp, vec_dist(evaluate(fam, t, x), x, norm));
    if (sup_disp >= mu) continue;
    MapFn g = [&fam, t](const Vec& x) {
      return vec_sub(evaluate(fam, t, x), x);
    };
    double lip = lip_local(g, d_hat, fam.domain, mu, sample, 3, min_sep)
                     .values[0];
    if (lip >= mu) continue;
    delta1 = t;
    break;
  }
  if (delta1 == 0.0)
    fail(ErrorCode::NoDelta1,
         "no schedule time satisfies both smallness conditions");

  GeneratorEstimate est;
  est.points = sample.points;
  est.certificate.mu = mu;
  est.certificate.delta1 = delta1;
  est.certificate.epsilon = epsilon;
  est.certificate.L = 2.0 * mu / ((1.0 - mu) * delta1);
  est.certificate.bound = 6.0 * epsilon * est.certificate.L;
  double threshold = std::min(est.certificate.bound, gap_floor);

  std::vector<Vec> prev;
  int streak = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  bool gaps_ok = false;
  for (double t : t_schedule) {
    if (t > delta1) continue;
    std::vector<Vec> cur;
    cur.reserve(sample.points.size());
    for (const Vec& x : sample.points)
      cur.push_back(difference_quotient(fam, t, x));
    est.t_schedule.push_back(t);
    if (!prev.empty()) {
      double gap = 0.0;
      for (size_t i = 0; i < cur.size(); ++i)
        gap = std::max(gap, vec_dist(cur[i], prev[i], norm));
      // A Cauchy net keeps shrinking; a gap 4x above the running minimum
      // while still over the certificate bound means the net lost it.
      if (gap > est.certificate.bound && gap > 4.0 * min_gap)
        fail(ErrorCode::Diverging,
             "difference quotients drift apart down the schedule");
      min_gap = std::min(min_gap, gap);
      est.gaps.push_back(gap);
      streak = gap <= threshold ? streak + 1 : 0;
    }
    prev = std::move(cur);
    if (streak >= 3) {
      gaps_ok = true;
      break;
    }
  }
  est.f_values = std::move(prev);
  est.cauchy_gap = est.gaps.empty() ? 0.0 : est.gaps.back();

  bool bounded = true;
  for (const Vec& f : est.f_values)
    if (vec_norm(f, norm) > est.certificate.L * (1.0 + 1e-12)) bounded = false;
  est.converged =
      gaps_ok && bounded && est.cauchy_gap <= est.certificate.bound;
  return est;
}

ModulusReport cauchy_problem_residual(const SemigroupFamily& fam,
                                      const VectorField& f, const Vec& x,
                                      const std::vector<double>& t_grid,
                                      double step) {
  require(step > 0.0, ErrorCode::BadParameter, "step must be positive");
  require(!t_grid.empty(), ErrorCode::BadParameter, "empty time grid");
  require(vec_dist(evaluate(fam, 0.0, x), x, fam.domain.norm) <= 1e-14,
          ErrorCode::ContractViolation, "family does not start at identity");

  ModulusReport rep;
  rep.t_grid = t_grid;
  rep.estimator_kind = "sampled_lower_bound";
  rep.fd_step = step;
  rep.sample_descriptor.n_points = 1;
  for (double t : t_grid) {
    require(t >= step, ErrorCode::BadParameter,
            "grid time below the difference step");
    Vec incr = fam.centered_tdiff
                   ? fam.centered_tdiff(t, step, x)
                   : vec_sub(evaluate(fam, t + step, x),
                             evaluate(fam, t - step, x));
    Vec u = evaluate(fam, t, x);
    double r = vec_dist(vec_scale(incr, 1.0 / (2.0 * step)), f.f(u),
                        fam.domain.norm);
    rep.values.push_back(r);
    rep.witnesses.push_back(ModulusWitness{x, {}, false, r});
  }
  return rep;
}

std::vector<Corner> detect_corners(const SemigroupFamily& fam, const Vec& x,
                                   const std::vector<double>& t_grid,
                                   double step, double jump_threshold) {
  require(step > 0.0, ErrorCode::BadParameter, "step must be positive");
  require(t_grid.size() >= 3, ErrorCode::BadParameter,
          "grid needs at least three times");
  require(t_grid.front() >= 5.0 * step, ErrorCode::BadParameter,
          "grid must start at or above 5 step");
  NormKind norm = fam.domain.norm;

  std::vector<Vec> traj;
  traj.reserve(t_grid.size());
  for (double t : t_grid) traj.push_back(evaluate(fam, t, x));

  auto second_diff = [&](double t, double h) {
    Vec hi = evaluate(fam, t + h, x);
    Vec lo = evaluate(fam, t - h, x);
    Vec mid = evaluate(fam, t, x);
    Vec d(x.size());
    for (size_t i = 0; i < x.size(); ++i) d[i] = hi[i] - 2.0 * mid[i] + lo[i];
    return vec_norm(d, norm);
  };
  auto centered_slope = [&](double t) {
    Vec hi = evaluate(fam, t + step, x);
    Vec lo = evaluate(fam, t - step, x);
    return vec_scale(vec_sub(hi, lo), 1.0 / (2.0 * step));
  };

  // secant slopes between grid nodes; a jump across a node flags a corner
  std::vector<Vec> secants(t_grid.size() - 1);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i)
    secants[i] = vec_scale(vec_sub(traj[i + 1], traj[i]),
                           1.0 / (t_grid[i + 1] - t_grid[i]));

  std::vector<Corner> corners;
  size_t i = 1;
  while (i + 1 < t_grid.size()) {
    double jump = vec_dist(secants[i], secants[i - 1], norm);
    if (jump <= jump_threshold) {
      ++i;
      continue;
    }
    // cluster of consecutive flagged nodes -> one corner at the largest jump
    size_t best = i;
    double best_jump = jump;
    while (i + 1 < t_grid.size()) {
      double j2 = vec_dist(secants[i], secants[i - 1], norm);
      if (j2 <= jump_threshold) break;
      if (j2 > best_jump) {
        best_jump = j2;
        best = i;
      }
      ++i;
    }
    // localize by maximizing the second difference at shrinking scales: at
    // scale h the kink sits under a triangular bump of support 2h, so
    // candidates spaced h/2 around a center within h of the kink always
    // keep it bracketed while h halves down to `step`
    double lo0 = t_grid[best - 1];
    double hi0 = t_grid[std::min(best + 1, t_grid.size() - 1)];
    double center = t_grid[best];
    double h = std::max(center - lo0, hi0 - center);
    while (h > step) {
      double hh = 0.5 * h;
      double best_val = -1.0, best_t = center;
      for (int k = -2; k <= 2; ++k) {
        double c = std::min(std::max(center + k * hh, lo0), hi0);
        double v = second_diff(c, hh);
        if (v > best_val) {
          best_val = v;
          best_t = c;
        }
      }
      center = best_t;
      h = hh;
    }
    double t_hat = center;

    Corner c;
    c.t_corner = t_hat;
    // centered quotients at +-2 step and +-4 step, extrapolated to t_hat
    Vec r1 = centered_slope(t_hat + 2.0 * step);
    Vec r2 = centered_slope(t_hat + 4.0 * step);
    Vec l1 = centered_slope(t_hat - 2.0 * step);
    Vec l2 = centered_slope(t_hat - 4.0 * step);
    c.right_slope = vec_sub(vec_scale(r1, 2.0), r2);
    c.left_slope = vec_sub(vec_scale(l1, 2.0), l2);
    // curvature can keep secant jumps above the threshold over whole grid
    // stretches; a real corner must keep the jump after localization
    if (vec_dist(c.left_slope, c.right_slope, norm) > jump_threshold)
      corners.push_back(std::move(c));
  }
  return corners;
}

}  // namespace semiflow
