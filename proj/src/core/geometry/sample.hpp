#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/geometry/subset.hpp"

namespace semiflow {

struct SampleDescriptor {
  std::uint64_t seed = 0;
  int n_points = 0;
  int n_pairs = 0;
  double mu = 0.0;
  std::string strategy;  // "grid" or "quasi-random"
};

struct SampleSet {
  std::vector<Vec> points;
  std::vector<std::pair<Vec, Vec>> pairs;
  SampleDescriptor descriptor;
};

// Deterministic points in the subset plus pairs (x, x*) with x a sampled
// point and 0 < ||x - x*|| <= mu. Pair displacements walk a fixed log ladder
// of scales per base point (mu down to 1e-8 mu) so that every magnitude
// regime is represented at every base; directions come from the seed.
// Requires mu <= subset_margin so displaced points stay inside the domain.
// Errors: EmptySample when the strategy cannot produce the requested points.
SampleSet draw_sample(const Subset& s, const Domain& d, double mu,
                      const std::string& strategy, int n_points, int n_pairs,
                      std::uint64_t seed);

// Points-only variant (no pair budget, mu only recorded).
SampleSet draw_points(const Subset& s, const Domain& d,
                      const std::string& strategy, int n_points,
                      std::uint64_t seed);

}  // namespace semiflow
