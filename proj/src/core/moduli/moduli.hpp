#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/geometry/sample.hpp"
#include "core/models/family.hpp"
#include "core/moduli/report.hpp"

namespace semiflow {

using MapFn = std::function<Vec(const Vec&)>;

// Largest difference quotient ||F(x)-F(x~)|| / ||x-x~|| over the given
// pairs. A lower bound for the Lipschitz seminorm of F over the whole
// domain; the report says so in estimator_kind.
// Errors: DegeneratePair when a pair has x == x~, EmptySample.
ModulusReport lip_seminorm(const MapFn& F, const SampleSet& pairs,
                           NormKind norm);

// Localized variant: bases must lie in d_hat and displacements stay within
// mu (ContractViolation otherwise); mu must not exceed the margin of d_hat
// in d (MarginViolation). After the raw scan the estimate is sharpened by
// refine_rounds sweeps that rescan the displacement ladder around the
// current best witnesses. min_separation drops pairs closer than that
// before quotients are formed, so evaluation noise cannot pose as
// Lipschitz mass; 0 keeps everything.
ModulusReport lip_local(const MapFn& F, const Subset& d_hat, const Domain& d,
                        double mu, const SampleSet& pairs,
                        int refine_rounds = 3, double min_separation = 0.0);

// sup_x ||F_t(x) - F_t0(x)|| over a grid sample of d_hat, one value per
// grid time. Decay toward t0 is whatever the numbers show; nothing is
// assumed.
ModulusReport t_continuity_modulus(const SemigroupFamily& fam,
                                   const Subset& d_hat, double t0,
                                   const std::vector<double>& t_grid,
                                   int n_points = 101, std::uint64_t seed = 1);

// lip_local of F_t - Id at each grid time, sharing one pair set. Pairs
// separated by less than 1e4 times the family's evaluation tolerance are
// skipped.
ModulusReport t_lipschitz_modulus(const SemigroupFamily& fam,
                                  const Subset& d_hat, double mu,
                                  const std::vector<double>& t_grid,
                                  const SampleSet& pairs);

// sup over the sample of ||Id - F_t'(x)|| at each grid time. Uses the
// family derivative when present (certified upper-bound mode per point);
// otherwise central differences with the given step, recorded in the
// report.
ModulusReport derivative_modulus(const SemigroupFamily& fam,
                                 const Subset& d_mu,
                                 const std::vector<double>& t_grid,
                                 const SampleSet& sample,
                                 double fd_step = 1e-5);

}  // namespace semiflow
