#include "core/moduli/moduli.hpp"

#include <algorithm>
#include <cmath>

#include "core/models/checks.hpp"
#include "core/support/error.hpp"

namespace semiflow {

namespace {

double pair_quotient(const MapFn& F, const Vec& x, const Vec& xt,
                     NormKind norm) {
  double den = vec_dist(x, xt, norm);
  require(den > 0.0, ErrorCode::DegeneratePair, "pair with x == x~");
  return vec_dist(F(x), F(xt), norm) / den;
}

void validate_pairs(const SampleSet& pairs, const Subset& d_hat,
                    const Domain& d, double mu) {
  require(mu > 0.0, ErrorCode::BadParameter, "mu must be positive");
  require(!pairs.pairs.empty(), ErrorCode::EmptySample, "no pairs given");
  require(mu <= subset_margin(d_hat, d) * (1.0 + 1e-12),
          ErrorCode::MarginViolation, "mu exceeds the margin of d_hat");
  for (const auto& [x, xt] : pairs.pairs) {
    require(subset_contains(d_hat, x, d.norm), ErrorCode::ContractViolation,
            "pair base outside d_hat");
    require(vec_dist(x, xt, d.norm) <= mu * (1.0 + 1e-9),
            ErrorCode::ContractViolation, "pair displacement exceeds mu");
  }
}

struct BestPair {
  double value = -1.0;
  Vec x, xt;
};

void consider(BestPair& best, const MapFn& F, const Vec& x, const Vec& xt,
              NormKind norm) {
  double q = pair_quotient(F, x, xt, norm);
  if (q > best.value) best = {q, x, xt};
}

// Raw sup over the pairs, then refine_rounds sweeps rescanning the
// displacement ladder along the best witness direction (and from the pair
// midpoint when it stays in d_hat). Candidates leaving the domain or
// closer than min_sep are skipped; the reported value only ever grows.
BestPair refined_pair_sup(const MapFn& F, const Subset& d_hat,
                          const Domain& d, double mu, const SampleSet& pairs,
                          int rounds, double min_sep) {
  BestPair best;
  for (const auto& [x, xt] : pairs.pairs) {
    if (min_sep > 0.0 && vec_dist(x, xt, d.norm) < min_sep) continue;
    consider(best, F, x, xt, d.norm);
  }
  require(best.value >= 0.0, ErrorCode::EmptySample,
          "all pairs fall below the separation floor");

  for (int round = 0; round < rounds; ++round) {
    BestPair seed = best;
    double den = vec_dist(seed.x, seed.xt, d.norm);
    Vec u = vec_scale(vec_sub(seed.xt, seed.x), 1.0 / den);
    Vec mid = vec_lerp(seed.x, seed.xt, 0.5);
    bool mid_ok = subset_contains(d_hat, mid, d.norm);
    for (int rung = 0; rung < 9; ++rung) {
      double s = mu * std::pow(10.0, -rung);
      if (rung == 0) s *= 1.0 - 1e-9;
      if (min_sep > 0.0 && s < min_sep) break;
      for (double sign : {1.0, -1.0}) {
        Vec step = vec_scale(u, sign * s);
        Vec cand = vec_add(seed.x, step);
        if (cand != seed.x && domain_contains(d, cand))
          consider(best, F, seed.x, cand, d.norm);
        if (mid_ok) {
          Vec mcand = vec_add(mid, step);
          if (mcand != mid && domain_contains(d, mcand))
            consider(best, F, mid, mcand, d.norm);
        }
      }
    }
  }
  return best;
}

ModulusWitness to_witness(const BestPair& b) {
  return ModulusWitness{b.x, b.xt, true, b.value};
}

}  // namespace

ModulusReport lip_seminorm(const MapFn& F, const SampleSet& pairs,
                           NormKind norm) {
  require(!pairs.pairs.empty(), ErrorCode::EmptySample, "no pairs given");
  BestPair best;
  for (const auto& [x, xt] : pairs.pairs) consider(best, F, x, xt, norm);
  ModulusReport rep;
  rep.t_grid = {0.0};
  rep.values = {best.value};
  rep.witnesses = {to_witness(best)};
  rep.estimator_kind = "sampled_lower_bound";
  rep.sample_descriptor = pairs.descriptor;
  return rep;
}

ModulusReport lip_local(const MapFn& F, const Subset& d_hat, const Domain& d,
                        double mu, const SampleSet& pairs, int refine_rounds,
                        double min_separation) {
  validate_pairs(pairs, d_hat, d, mu);
  BestPair best =
      refined_pair_sup(F, d_hat, d, mu, pairs, refine_rounds, min_separation);
  ModulusReport rep;
  rep.t_grid = {0.0};
  rep.values = {best.value};
  rep.witnesses = {to_witness(best)};
  rep.estimator_kind = "sampled_lower_bound";
  rep.sample_descriptor = pairs.descriptor;
  rep.sample_descriptor.mu = mu;
  return rep;
}

ModulusReport t_continuity_modulus(const SemigroupFamily& fam,
                                   const Subset& d_hat, double t0,
                                   const std::vector<double>& t_grid,
                                   int n_points, std::uint64_t seed) {
  require(t0 >= 0.0, ErrorCode::BadParameter, "t0 must be nonnegative");
  SampleSet pts = draw_points(d_hat, fam.domain, "grid", n_points, seed);
  std::vector<Vec> at_t0;
  at_t0.reserve(pts.points.size());
  for (const Vec& x : pts.points) at_t0.push_back(evaluate(fam, t0, x));

  ModulusReport rep;
  rep.t_grid = t_grid;
  rep.estimator_kind = "sampled_lower_bound";
  rep.sample_descriptor = pts.descriptor;
  for (double t : t_grid) {
    require(t >= 0.0, ErrorCode::BadParameter, "grid time must be nonnegative");
    BestPair best;
    for (size_t i = 0; i < pts.points.size(); ++i) {
      double v = vec_dist(evaluate(fam, t, pts.points[i]), at_t0[i],
                          fam.domain.norm);
      if (v > best.value) best = {v, pts.points[i], {}};
    }
    rep.values.push_back(best.value);
    rep.witnesses.push_back(ModulusWitness{best.x, {}, false, best.value});
  }
  return rep;
}

ModulusReport t_lipschitz_modulus(const SemigroupFamily& fam,
                                  const Subset& d_hat, double mu,
                                  const std::vector<double>& t_grid,
                                  const SampleSet& pairs) {
  validate_pairs(pairs, d_hat, fam.domain, mu);
  double min_sep = 1e4 * fam.eval_tolerance;

  ModulusReport rep;
  rep.t_grid = t_grid;
  rep.estimator_kind = "sampled_lower_bound";
  rep.sample_descriptor = pairs.descriptor;
  rep.sample_descriptor.mu = mu;
  for (double t : t_grid) {
    require(t >= 0.0, ErrorCode::BadParameter, "grid time must be nonnegative");
    MapFn g = [&fam, t](const Vec& x) {
      return vec_sub(evaluate(fam, t, x), x);
    };
    BestPair best =
        refined_pair_sup(g, d_hat, fam.domain, mu, pairs, 3, min_sep);
    rep.values.push_back(best.value);
    rep.witnesses.push_back(to_witness(best));
  }
  return rep;
}

ModulusReport derivative_modulus(const SemigroupFamily& fam,
                                 const Subset& d_mu,
                                 const std::vector<double>& t_grid,
                                 const SampleSet& sample, double fd_step) {
  require(!sample.points.empty(), ErrorCode::EmptySample, "no sample points");
  bool analytic = fam.has_derivative();
  Mat id = Mat::identity(fam.domain.dim);

  ModulusReport rep;
  rep.t_grid = t_grid;
  rep.estimator_kind = analytic ? "derivative_certified_upper_bound"
                                : "sampled_lower_bound";
  rep.sample_descriptor = sample.descriptor;
  rep.fd_step = analytic ? 0.0 : fd_step;
  for (double t : t_grid) {
    require(t >= 0.0, ErrorCode::BadParameter, "grid time must be nonnegative");
    BestPair best;
    for (const Vec& x : sample.points) {
      require(subset_contains(d_mu, x, fam.domain.norm),
              ErrorCode::ContractViolation, "sample point outside d_mu");
      FrechetResult fr = frechet_derivative(fam, t, x, fd_step, analytic);
      double v = operator_norm(mat_sub(id, fr.op), fam.domain.norm);
      if (v > best.value) best = {v, x, {}};
    }
    rep.values.push_back(best.value);
    rep.witnesses.push_back(ModulusWitness{best.x, {}, false, best.value});
  }
  return rep;
}

}  // namespace semiflow
